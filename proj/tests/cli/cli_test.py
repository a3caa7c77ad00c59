#!/usr/bin/env python3
"""Integration tests for the dfcert command-line tool.

Drives the built binary end to end: exit codes, CSV shape, JSON schema
conformance, frozen numeric values, and byte-level determinism.
"""

import argparse
import json
import math
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

UNIFORM3 = "0.3333333333333333,0.3333333333333333,0.3333333333333334"
BARYCENTER3 = UNIFORM3

STAR4 = [
    [0.0, 0.3333333333333333, 0.3333333333333333, 0.3333333333333334],
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
]

# Two disjoint 3-cycles.
DISCONNECTED6 = [
    [0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
]


class Harness:
    def __init__(self, binary, schema_dir, workdir):
        self.binary = binary
        self.schema_dir = pathlib.Path(schema_dir)
        self.workdir = pathlib.Path(workdir)
        self.failures = []
        self._config_counter = 0

    def run(self, *args):
        return subprocess.run(
            [self.binary, *args], capture_output=True, text=True, timeout=120
        )

    def config_file(self, content):
        self._config_counter += 1
        path = self.workdir / f"config_{self._config_counter}.json"
        if isinstance(content, str):
            path.write_text(content)
        else:
            path.write_text(json.dumps(content))
        return str(path)

    def validate(self, document, schema_name):
        schema = json.loads((self.schema_dir / schema_name).read_text())
        jsonschema.validate(document, schema)

    def check(self, name, condition, detail=""):
        if not condition:
            self.failures.append(f"{name}: {detail}")
            print(f"  FAIL {name}: {detail}")

    def case(self, name):
        print(f"[case] {name}")
        return name


def expect_exit(h, name, result, code):
    h.check(
        name,
        result.returncode == code,
        f"exit {result.returncode}, expected {code}; stderr: {result.stderr.strip()}",
    )


def test_simulate(h):
    name = h.case("simulate emits a CSV trajectory")
    result = h.run("simulate", "--gamma", "0.4,0.35,0.25", "--x0", "0.2,0.4,0.4", "--steps", "3")
    expect_exit(h, name, result, 0)
    lines = result.stdout.strip().splitlines()
    h.check(name, lines[0] == "step,x_1,x_2,x_3", f"header is {lines[0]!r}")
    h.check(name, len(lines) == 5, f"{len(lines)} lines for 3 steps")
    first = lines[1].split(",")
    h.check(name, first[0] == "0" and math.isclose(float(first[1]), 0.2, abs_tol=1e-15),
            f"first row {lines[1]!r}")

    name = h.case("simulate with zero steps emits only the start")
    result = h.run("simulate", "--gamma", "0.4,0.35,0.25", "--x0", "0.2,0.4,0.4", "--steps", "0")
    expect_exit(h, name, result, 0)
    h.check(name, len(result.stdout.strip().splitlines()) == 2, "expected header + 1 row")

    name = h.case("simulate rejects a negative coordinate")
    result = h.run("simulate", "--gamma", "0.4,0.35,0.25", "--x0=-0.2,0.6,0.6", "--steps", "3")
    expect_exit(h, name, result, 3)

    name = h.case("simulate rejects --format json")
    result = h.run("simulate", "--gamma", "0.4,0.35,0.25", "--x0", "0.2,0.4,0.4", "--steps", "3",
                   "--format", "json")
    expect_exit(h, name, result, 2)


def test_certify(h):
    name = h.case("certify the uniform model")
    result = h.run("certify", "--gamma", UNIFORM3)
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.validate(report, "certificate.v1.schema.json")
    h.check(name, report["verdict"] == "UniqueExpStable", report.get("detail", ""))
    h.check(name, report["index_sum"] == 1, f"index_sum {report['index_sum']}")
    h.check(name, report["euler_characteristic"] == 1, "euler_characteristic")
    h.check(name, len(report["interior_fixed_points"]) == 1, "interior count")
    location = report["interior_fixed_points"][0]["location"]
    h.check(name, max(abs(v - 1.0 / 3.0) for v in location) <= 1e-10,
            f"fixed point {location} is off the barycenter")
    h.check(name, len(report["corner_reports"]) == 3, "corner count")
    for corner in report["corner_reports"]:
        h.check(name, abs(corner["eigenvalue"] - 2.0) <= 1e-9,
                f"corner eigenvalue {corner['eigenvalue']}")
        h.check(name, corner["lefschetz_index"] == -1, "corner index")
    h.check(name, report["seed"] == 0, "default seed")

    name = h.case("certify output is byte-identical across reruns")
    second = h.run("certify", "--gamma", UNIFORM3)
    h.check(name, second.stdout == result.stdout, "stdout differs between runs")

    name = h.case("certify writes the report to --output")
    out_path = h.workdir / "certificate.json"
    result = h.run("certify", "--gamma", UNIFORM3, "--output", str(out_path))
    expect_exit(h, name, result, 0)
    h.check(name, result.stdout == "", "stdout should be empty with --output")
    h.validate(json.loads(out_path.read_text()), "certificate.v1.schema.json")

    name = h.case("certify via an interaction-matrix config")
    config = h.config_file({"interaction_matrix": [
        [0.0, 0.5, 0.5],
        [0.5, 0.0, 0.5],
        [0.5, 0.5, 0.0],
    ]})
    result = h.run("certify", "--config", config)
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.validate(report, "certificate.v1.schema.json")
    h.check(name, report["verdict"] == "UniqueExpStable", report.get("detail", ""))

    name = h.case("certify rejects the star interaction matrix")
    config = h.config_file({"interaction_matrix": STAR4})
    result = h.run("certify", "--config", config)
    expect_exit(h, name, result, 6)

    name = h.case("certify rejects a disconnected interaction matrix")
    config = h.config_file({"interaction_matrix": DISCONNECTED6})
    result = h.run("certify", "--config", config)
    expect_exit(h, name, result, 6)

    name = h.case("certify with zero multistarts is inconclusive")
    config = h.config_file({"gamma": [0.4, 0.35, 0.25], "solver": {"multistart_count": 0}})
    result = h.run("certify", "--config", config)
    expect_exit(h, name, result, 5)
    report = json.loads(result.stdout)
    h.validate(report, "certificate.v1.schema.json")
    h.check(name, report["verdict"] == "Inconclusive", report["verdict"])

    name = h.case("certify honors the seed from the command line")
    result = h.run("certify", "--gamma", UNIFORM3, "--seed", "42")
    expect_exit(h, name, result, 0)
    h.check(name, json.loads(result.stdout)["seed"] == 42, "seed field")


def test_spectrum(h):
    name = h.case("spectrum at the barycenter of the uniform model")
    result = h.run("spectrum", "--gamma", UNIFORM3, "--x0", BARYCENTER3)
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.validate(report, "spectrum.v1.schema.json")
    reduced = report["reduced_eigenvalues"]
    h.check(name, len(reduced) == 2 and all(abs(v - 0.5) <= 1e-9 for v in reduced),
            f"reduced eigenvalues {reduced}")
    h.check(name, abs(report["full_eigenvalues"][0]) <= 1e-9, "structural zero eigenvalue")
    h.check(name, report["column_sum_max_abs"] <= 1e-11,
            f"column sums {report['column_sum_max_abs']}")

    name = h.case("spectrum rejects a corner-adjacent point")
    result = h.run("spectrum", "--gamma", UNIFORM3, "--x0", "0.9999999999,5e-11,5e-11")
    expect_exit(h, name, result, 3)


def test_fixed_point(h):
    frozen = [15.0 / 31.0, 10.0 / 31.0, 6.0 / 31.0]

    name = h.case("fixed-point enumeration finds the known interior point")
    result = h.run("fixed-point", "--gamma", "0.4,0.35,0.25")
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.validate(report, "fixed_points.v1.schema.json")
    interior = [p for p in report["fixed_points"] if not p["is_corner"]]
    corners = [p for p in report["fixed_points"] if p["is_corner"]]
    h.check(name, len(interior) == 1, f"{len(interior)} interior records")
    h.check(name, len(corners) == 3, f"{len(corners)} corner records")
    h.check(name, report["converged_starts"] == 51, "51 starts (50 sampled + barycenter)")
    location = interior[0]["location"]
    h.check(name, max(abs(a - b) for a, b in zip(location, frozen)) <= 1e-12,
            f"interior location {location}")

    name = h.case("the located fixed point is seed-independent")
    result = h.run("fixed-point", "--gamma", "0.4,0.35,0.25", "--seed", "5")
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.check(name, report["seed"] == 5, "seed field")
    interior = [p for p in report["fixed_points"] if not p["is_corner"]]
    h.check(name, len(interior) == 1, f"{len(interior)} interior records")
    location = interior[0]["location"]
    h.check(name, max(abs(a - b) for a, b in zip(location, frozen)) <= 1e-12,
            f"interior location {location}")


def test_rate(h):
    name = h.case("rate matches the spectral radius on the uniform model")
    result = h.run("rate", "--gamma", UNIFORM3, "--x0", "0.4,0.3,0.3", "--steps", "400")
    expect_exit(h, name, result, 0)
    report = json.loads(result.stdout)
    h.validate(report, "rate.v1.schema.json")
    h.check(name, abs(report["spectral_rate"] - 0.5) <= 1e-9,
            f"spectral rate {report['spectral_rate']}")
    h.check(name, report["relative_gap"] <= 0.1, f"relative gap {report['relative_gap']}")
    h.check(name, report["tail_points"] >= 10, "tail points")

    name = h.case("rate from the fixed point itself has no tail")
    result = h.run("rate", "--gamma", UNIFORM3, "--x0", BARYCENTER3, "--steps", "400")
    expect_exit(h, name, result, 3)


def test_config_errors(h):
    cases = [
        ("malformed JSON", "{ this is not json"),
        ("unknown top-level key", {"gamma": [0.4, 0.35, 0.25], "typo_key": True}),
        ("gamma and matrix together",
         {"gamma": [0.4, 0.35, 0.25],
          "interaction_matrix": [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0]]}),
        ("neither gamma nor matrix", {}),
        ("gamma of wrong type", {"gamma": "0.4,0.35,0.25"}),
        ("unknown solver key", {"gamma": [0.4, 0.35, 0.25],
                                "solver": {"picard_tolerance": 1e-13}}),
        ("solver field of wrong type", {"gamma": [0.4, 0.35, 0.25],
                                        "solver": {"picard_tol": "tight"}}),
    ]
    for label, content in cases:
        name = h.case(f"config error: {label}")
        result = h.run("certify", "--config", h.config_file(content))
        expect_exit(h, name, result, 2)

    name = h.case("config error: unparsable --gamma")
    result = h.run("certify", "--gamma", "0.4,zero.35,0.25")
    expect_exit(h, name, result, 2)

    name = h.case("usage error: unknown flag")
    result = h.run("certify", "--gamma", UNIFORM3, "--no-such-flag")
    expect_exit(h, name, result, 2)

    name = h.case("usage error: missing subcommand")
    result = h.run()
    expect_exit(h, name, result, 2)

    name = h.case("domain error: star-graph weights")
    result = h.run("certify", "--gamma", "0.5,0.25,0.25")
    expect_exit(h, name, result, 6)

    name = h.case("domain error: weights that do not sum to one")
    result = h.run("certify", "--gamma", "0.4,0.4,0.4")
    expect_exit(h, name, result, 3)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--binary", required=True, help="path to the dfcert executable")
    parser.add_argument("--schemas", required=True, help="directory with the JSON schemas")
    args = parser.parse_args()

    with tempfile.TemporaryDirectory(prefix="dfcert_cli_") as workdir:
        h = Harness(args.binary, args.schemas, workdir)
        test_simulate(h)
        test_certify(h)
        test_spectrum(h)
        test_fixed_point(h)
        test_rate(h)
        test_config_errors(h)

    if h.failures:
        print(f"\n{len(h.failures)} failure(s)")
        return 1
    print("\nall CLI cases passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
