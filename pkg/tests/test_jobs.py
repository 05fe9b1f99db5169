"""Job documents: parsing, validation diagnostics, canonical round trip."""

import json
import math
import pathlib

import pytest

import conicquad
from conicquad.jobs import (
    JobError,
    canonical_json,
    job_to_inputs,
    load_job,
    parse_job,
)

DATA = pathlib.Path(conicquad.__file__).parent / "data" / "jobs"

DISC = {
    "triangle": [[-3.0, -3.0], [3.0, -3.0], [0.0, 4.0]],
    "f": {"a20": -1.0, "a02": -1.0, "a00": 1.0},
    "g": [[0, 0, 1.0]],
}


def make(payload: dict):
    return parse_job(json.dumps(payload))


class TestParse:
    def test_minimal_region_job(self):
        inputs = job_to_inputs(make(DISC))
        assert inputs.band is None
        assert inputs.t.vertices == ((-3.0, -3.0), (3.0, -3.0), (0.0, 4.0))
        assert inputs.f.coeff(2, 0) == -1.0
        assert inputs.f.coeff(0, 0) == 1.0
        assert inputs.g.coeff(0, 0) == 1.0

    def test_quad_coeff_defaults_are_zero(self):
        job = make({**DISC, "f": {"a00": 1.0}})
        inputs = job_to_inputs(job)
        assert inputs.f.coeff(2, 0) == 0.0
        assert inputs.f.coeff(0, 0) == 1.0

    def test_duplicate_monomials_sum(self):
        job = make({**DISC, "g": [[1, 1, 2.0], [1, 1, 3.0]]})
        assert job_to_inputs(job).g.coeff(1, 1) == 5.0

    def test_phi_pair_multiplies(self):
        payload = dict(DISC)
        del payload["g"]
        payload["phi1"] = {"a10": 1.0}
        payload["phi2"] = {"a01": 1.0, "a00": 2.0}
        g = job_to_inputs(make(payload)).g
        # x * (y + 2) = xy + 2x
        assert g.coeff(1, 1) == 1.0
        assert g.coeff(1, 0) == 2.0
        assert g.coeff(0, 1) == 0.0

    def test_band_job(self):
        payload = {
            "triangle": [[-5.0, -5.0], [5.0, -5.0], [0.0, 7.0]],
            "band": {"p": {"a20": 1.0, "a02": 1.0}, "alpha": 2.0, "fa": -4.0, "fb": -1.0},
        }
        inputs = job_to_inputs(make(payload))
        assert inputs.f is None
        assert inputs.band.alpha == 2.0
        assert inputs.band.f_a == -4.0
        assert inputs.g.coeff(0, 0) == 1.0  # v defaults to the constant 1

    def test_band_custom_integrand(self):
        payload = {
            "triangle": [[-5.0, -5.0], [5.0, -5.0], [0.0, 7.0]],
            "band": {
                "p": {"a20": 1.0, "a02": 1.0},
                "alpha": 1.0,
                "fa": -4.0,
                "fb": -1.0,
                "v": [[2, 1, 0.5]],
            },
        }
        assert job_to_inputs(make(payload)).g.coeff(2, 1) == 0.5


class TestValidationErrors:
    def assert_message(self, payload: dict, fragment: str):
        with pytest.raises(JobError) as err:
            make(payload)
        assert fragment in str(err.value), str(err.value)

    def test_missing_f(self):
        payload = {"triangle": DISC["triangle"], "g": [[0, 0, 1.0]]}
        self.assert_message(payload, "f is required")

    def test_missing_integrand(self):
        payload = {"triangle": DISC["triangle"], "f": DISC["f"]}
        self.assert_message(payload, "exactly one of")

    def test_two_integrands(self):
        payload = {
            **DISC,
            "band": {"p": {"a20": 1.0}, "alpha": 1.0, "fa": 0.0, "fb": 1.0},
        }
        self.assert_message(payload, "exactly one of")

    def test_phi1_alone(self):
        payload = {"triangle": DISC["triangle"], "f": DISC["f"], "phi1": {"a10": 1.0}}
        self.assert_message(payload, "phi1 and phi2 must be given together")

    def test_band_with_f(self):
        payload = {
            "triangle": DISC["triangle"],
            "f": DISC["f"],
            "band": {"p": {"a20": 1.0}, "alpha": 1.0, "fa": 0.0, "fb": 1.0},
        }
        self.assert_message(payload, "drop f")

    def test_unknown_field_rejected(self):
        self.assert_message({**DISC, "gg": 1}, "gg")

    def test_unknown_coeff_rejected(self):
        self.assert_message({**DISC, "f": {"a30": 1.0}}, "a30")

    def test_two_point_triangle(self):
        self.assert_message({**DISC, "triangle": [[0, 0], [1, 0]]}, "triangle")

    def test_invalid_json_reports_position(self):
        with pytest.raises(JobError) as err:
            parse_job('{"triangle": [[0,0],[1,0],[0,1]]')
        assert "line 1" in str(err.value)

    def test_infinity_literal_rejected(self):
        with pytest.raises(JobError) as err:
            parse_job('{"triangle": [[0,0],[1,0],[0,Infinity]]}')
        assert "non-finite" in str(err.value)

    def test_overflowing_number_rejected(self):
        self.assert_message(
            {**DISC, "f": {"a00": 1e999}}, "finite"
        )

    def test_negative_exponent(self):
        with pytest.raises(JobError):
            job_to_inputs(make({**DISC, "g": [[-1, 0, 1.0]]}))

    def test_integrand_degree_cap(self):
        with pytest.raises(JobError) as err:
            job_to_inputs(make({**DISC, "g": [[3, 2, 1.0]]}))
        assert "degree 4" in str(err.value)

    def test_band_degree_cap(self):
        payload = {
            "triangle": DISC["triangle"],
            "band": {
                "p": {"a20": 1.0},
                "alpha": 1.0,
                "fa": 0.0,
                "fb": 1.0,
                "v": [[5, 0, 1.0]],
            },
        }
        with pytest.raises(JobError):
            job_to_inputs(make(payload))

    def test_band_alpha_zero(self):
        payload = {
            "triangle": DISC["triangle"],
            "band": {"p": {"a20": 1.0}, "alpha": 0.0, "fa": 0.0, "fb": 1.0},
        }
        with pytest.raises(JobError) as err:
            job_to_inputs(make(payload))
        assert "alpha" in str(err.value)

    def test_band_empty_interval(self):
        payload = {
            "triangle": DISC["triangle"],
            "band": {"p": {"a20": 1.0}, "alpha": 1.0, "fa": 2.0, "fb": 1.0},
        }
        with pytest.raises(JobError):
            job_to_inputs(make(payload))

    def test_load_missing_file_names_path(self):
        with pytest.raises(JobError) as err:
            load_job("/tmp/definitely-not-a-job.json")
        assert "/tmp/definitely-not-a-job.json" in str(err.value)


class TestRoundTrip:
    def test_canonical_is_fixed_point(self):
        job = make(DISC)
        text = canonical_json(job)
        assert canonical_json(parse_job(text)) == text

    def test_reparse_gives_equal_model(self):
        job = make(DISC)
        assert parse_job(canonical_json(job)) == job

    def test_awkward_floats_survive_bit_exactly(self):
        payload = {
            "triangle": [[0.1, -2.5e300], [1e-17, 0.0], [3.0, 7.000000000000001]],
            "f": {"a20": -0.3333333333333333, "a00": 1.0},
            "g": [[0, 0, 0.1]],
        }
        job = make(payload)
        again = parse_job(canonical_json(job))
        assert again.triangle == job.triangle
        assert again == job

    def test_checked_in_jobs_are_canonical(self):
        for path in sorted(DATA.glob("*.json")):
            text = path.read_text()
            assert canonical_json(parse_job(text)) == text, path.name

    def test_checked_in_jobs_all_run(self):
        for path in sorted(DATA.glob("*.json")):
            inputs = job_to_inputs(load_job(str(path)))
            assert math.isfinite(inputs.t.area)
