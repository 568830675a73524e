import copy
import json
from pathlib import Path

import pytest

from layerbench.session import SessionError, analyze_log, ingest_session, parse_session

FIXTURES = Path(__file__).parent / "fixtures"


def load_doc(name):
    return json.loads((FIXTURES / name).read_text())


class TestSchemaValidation:
    def test_fixture_logs_are_valid(self):
        for name in ("session_zero_input.json", "session_perfect_model.json"):
            parse_session(load_doc(name))

    def test_wrong_schema_version(self):
        doc = load_doc("session_zero_input.json")
        doc["schema_version"] = 2
        with pytest.raises(SessionError, match="schema_version"):
            parse_session(doc)

    def test_missing_config_field(self):
        doc = load_doc("session_zero_input.json")
        del doc["config"]["seed"]
        with pytest.raises(SessionError, match="seed"):
            parse_session(doc)

    def test_decreasing_frame_time_names_index(self):
        doc = load_doc("session_zero_input.json")
        doc["frames"][5]["t"] = 3
        with pytest.raises(SessionError, match="frame 5"):
            parse_session(doc)

    def test_missing_frame_field_names_index(self):
        doc = load_doc("session_zero_input.json")
        del doc["frames"][7]["x"]
        with pytest.raises(SessionError, match="frame 7"):
            parse_session(doc)

    def test_non_finite_frame_value(self):
        doc = load_doc("session_zero_input.json")
        doc["frames"][2]["v"] = float("nan")
        with pytest.raises(SessionError, match="frame 2"):
            parse_session(doc)

    def test_frame_count_must_match_horizon(self):
        doc = load_doc("session_zero_input.json")
        doc["frames"] = doc["frames"][:-1]
        with pytest.raises(SessionError, match="frames"):
            parse_session(doc)

    def test_tick_floor(self):
        doc = load_doc("session_zero_input.json")
        doc["config"]["tick_ms"] = 5
        with pytest.raises(SessionError, match="tick_ms"):
            parse_session(doc)


class TestReplayChecks:
    def test_seed_mismatch_rejected(self):
        doc = load_doc("session_zero_input.json")
        doc["config"]["seed"] = 12
        log = parse_session(doc)
        with pytest.raises(SessionError, match="inconsistent with declared seed"):
            analyze_log(log)

    def test_tampered_state_rejected(self):
        doc = load_doc("session_zero_input.json")
        doc["frames"][10]["x"] += 0.5
        log = parse_session(doc)
        with pytest.raises(SessionError, match="frame 10"):
            analyze_log(log)

    def test_tampered_score_rejected(self):
        doc = load_doc("session_zero_input.json")
        doc["score"] += 0.01
        log = parse_session(doc)
        with pytest.raises(SessionError, match="score"):
            analyze_log(log)


class TestAnalysis:
    def test_zero_player_score_is_open_loop_cost(self):
        analysis = ingest_session(str(FIXTURES / "session_zero_input.json"))
        assert analysis["score_recomputed"] == pytest.approx(
            analysis["open_loop_cost"], abs=1e-12
        )
        reg = analysis["regression"]
        assert reg["coef_low"] == pytest.approx(0.0, abs=1e-9)
        assert reg["coef_high"] == pytest.approx(0.0, abs=1e-9)
        assert reg["residual_rms"] == pytest.approx(0.0, abs=1e-9)

    def test_perfect_model_player_unit_coefficients(self):
        analysis = ingest_session(str(FIXTURES / "session_perfect_model.json"))
        reg = analysis["regression"]
        assert reg["coef_low"] == pytest.approx(1.0, abs=1e-9)
        assert reg["coef_high"] == pytest.approx(1.0, abs=1e-9)
        assert abs(reg["intercept"]) < 1e-9
        assert reg["residual_rms"] < 1e-9

    def test_score_recomputation_matches_embedded(self):
        for name in ("session_zero_input.json", "session_perfect_model.json"):
            analysis = ingest_session(str(FIXTURES / name))
            assert abs(analysis["score_recomputed"] - analysis["score_embedded"]) <= 1e-6

    def test_not_json(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("not json {")
        with pytest.raises(SessionError, match="JSON"):
            ingest_session(str(p))
