import numpy as np
import pytest
from sklearn.base import clone
from sklearn.pipeline import make_pipeline

from botcorr.correlation import BotDetector, Verdict, analyze, EngineConfig
from botcorr.scenarios import ScenarioKind, ScenarioSpec, generate_scenario
from botcorr.signals import SignalExtractor, build_signal_timeline, timeline_to_array


@pytest.fixture(scope="module")
def bot_session():
    return generate_scenario(ScenarioSpec(kind=ScenarioKind.BOT_INACTIVE, duration=60, seed=1))


@pytest.fixture(scope="module")
def benign_session():
    return generate_scenario(ScenarioSpec(kind=ScenarioKind.BENIGN_CHAT, duration=60, seed=1))


def test_extractor_matches_functional_path(bot_session):
    X = SignalExtractor().fit(bot_session).transform(bot_session)
    expected = timeline_to_array(build_signal_timeline(bot_session))
    assert X.shape == (60, 3)
    np.testing.assert_array_equal(X, expected)


def test_extractor_params_round_trip():
    est = SignalExtractor(n_s3=25.0, s3_idle_value=90.0)
    params = est.get_params()
    assert params["n_s3"] == 25.0
    assert params["s3_idle_value"] == 90.0
    cloned = clone(est)
    assert cloned.get_params() == params
    est.set_params(n_s3=40.0)
    assert est.get_params()["n_s3"] == 40.0


def test_extractor_rejects_non_session():
    with pytest.raises(TypeError, match="Session"):
        SignalExtractor().transform(np.zeros((3, 3)))


def test_extractor_custom_n_s3_changes_output(bot_session):
    default = SignalExtractor().transform(bot_session)
    tight = SignalExtractor(n_s3=5.0).transform(bot_session)
    assert not np.array_equal(default[:, 2], tight[:, 2])


def test_detector_per_sv_outputs(bot_session):
    X = SignalExtractor().transform(bot_session)
    det = BotDetector().fit(X)
    scores = det.decision_function(X)
    labels = det.predict(X)
    assert scores.shape == labels.shape == (5,)
    assert (labels == 1).all()
    results = det.analyze(X)
    np.testing.assert_allclose(scores, [r.acv for r in results])


def test_detector_accepts_record_timeline(bot_session):
    timeline = build_signal_timeline(bot_session)
    det = BotDetector(sv_list=(10, 30))
    assert det.analyze(timeline) == analyze(timeline, EngineConfig(sv_list=(10, 30)))


def test_detector_validates_matrix_shape_and_range():
    det = BotDetector()
    with pytest.raises(ValueError, match="shape"):
        det.fit(np.zeros((4, 2)))
    with pytest.raises(ValueError, match="\\[0, 100\\]"):
        det.fit(np.full((4, 3), 150.0))
    with pytest.raises(ValueError, match="finite"):
        det.fit(np.full((4, 3), np.nan))


def test_detector_clone_keeps_params():
    det = BotDetector(sv_list=(5, 15), threshold=25.0, s3_mode="inverted", window=10)
    cloned = clone(det)
    assert cloned.get_params() == det.get_params()
    assert cloned.get_params()["s3_mode"] == "inverted"


def test_pipeline_composition(bot_session, benign_session):
    pipe = make_pipeline(SignalExtractor(), BotDetector())
    pipe.fit(bot_session)
    assert pipe.predict(bot_session).all()
    assert not pipe.predict(benign_session).any()


def test_pipeline_set_params_reaches_both_steps(bot_session):
    pipe = make_pipeline(SignalExtractor(), BotDetector())
    pipe.set_params(signalextractor__n_s3=30.0, botdetector__sv_list=(10,))
    pipe.fit(bot_session)
    assert pipe.predict(bot_session).shape == (1,)
