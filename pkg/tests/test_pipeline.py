from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from conftest import small_field
from isoconv import pipeline
from isoconv.convcode import search_mdp_code
from isoconv.decoder import ReceivedStream
from isoconv.errors import PatternError, ShapeError, SoundnessError
from isoconv.example import GAMMA, MASK, example_frame
from isoconv.pipeline import (
    IID,
    Burst,
    Frame,
    PatternChannel,
    SplitMix64,
    apply_channel,
    check_soundness,
    message_rng,
    mix64,
    run_experiment,
)
from isoconv.sysrep import realize


@pytest.fixture(scope="module")
def small_code():
    G = search_mdp_code(2, 1, 1, seed=0)
    return G, realize(G)


def test_splitmix_reference_outputs():
    # published outputs of the standard SplitMix64 stream
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF
    r = SplitMix64(1234567)
    assert [r.next_u64(), r.next_u64()] == [6457827717110365317, 3203168211198807973]


def test_splitmix_is_counter_based():
    r = SplitMix64(99)
    seq = [r.next_u64() for _ in range(5)]
    assert seq == [SplitMix64(99).at(i) for i in range(5)]
    assert mix64(0) == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 10**6))
def test_uniform_helpers_stay_in_range(seed, bound):
    r = SplitMix64(seed)
    assert 0 <= r.random() < 1
    assert 0 <= r.below(bound) < bound
    assert 0 <= r.bits(70) < 2**70
    F = small_field(3, 2)
    assert 0 <= r.field_element(F) < 9


def test_below_rejects_nonpositive_bound():
    with pytest.raises(ValueError):
        SplitMix64(0).below(0)


def test_message_stream_differs_from_channel_stream():
    assert message_rng(5).next_u64() != SplitMix64(5).next_u64()


def test_extreme_erasure_rates(small_code):
    G, _ = small_code
    frame = Frame.random(G, 3, SplitMix64(1))
    stream, mask = apply_channel(frame, IID(0.0), G.k)
    assert stream.blocks == frame.blocks and not any(map(any, mask))
    stream, mask = apply_channel(frame, IID(1.0), G.k)
    assert all(v is None for b in stream.blocks for v in b)
    stream, mask = apply_channel(frame, IID(0.5, p_y=0.0, p_u=1.0), G.k)
    assert all(m == [False, True] for m in mask)
    with pytest.raises(ValueError):
        IID(1.5)
    with pytest.raises(ValueError):
        Burst(0.1, -0.2)


def test_burst_channel_starts_good_and_clusters(small_code):
    G, _ = small_code
    frame = Frame.random(G, 30, SplitMix64(2))
    _, mask = apply_channel(frame, Burst(0.0, 1.0), G.k)
    assert not any(map(any, mask))
    _, mask = apply_channel(frame, Burst(1.0, 0.0), G.k)
    flat = sum(mask, [])
    assert flat[0] is False and all(flat[1:])


def test_pattern_channel(example_generator):
    _, word = example_frame(example_generator)
    frame = Frame(GAMMA, (), tuple(map(tuple, word)))
    stream, mask = apply_channel(frame, PatternChannel(MASK), 3)
    assert mask == [list(r) for r in MASK]
    assert stream == ReceivedStream.from_codeword(3, GAMMA, word, MASK)
    with pytest.raises(PatternError):
        apply_channel(frame, PatternChannel(MASK[:-1]), 3)
    with pytest.raises(PatternError):
        apply_channel(frame, PatternChannel(tuple(r[:-1] for r in MASK)), 3)


def test_channel_determinism(small_code):
    G, _ = small_code
    frame = Frame.random(G, 5, SplitMix64(3))
    for model in (IID(0.3, seed=4), Burst(0.2, 0.5, seed=4)):
        a = apply_channel(frame, model, G.k)
        b = apply_channel(frame, model, G.k, SplitMix64(4))
        assert a == b


def test_erasure_free_experiment(small_code):
    G, S = small_code
    stats = run_experiment(S, G, IID(0.0, seed=1), 1, 2)
    for name in ("decode", "baseline"):
        agg = stats.totals[name]
        assert agg.erasures == 0 and agg.delay_sum == 0 and agg.lost == 0


def test_experiment_conservation_and_direction(small_code):
    G, S = small_code
    stats = run_experiment(S, G, IID(0.2, seed=7), 200, 2)
    d = stats.to_dict(include_trials=True)
    assert d["trials"] == 200 and len(d["per_trial"]) == 200
    for name in ("decode", "baseline"):
        agg = stats.totals[name]
        assert agg.recovered + agg.lost == agg.erasures
        assert sum(agg.histogram.values()) == agg.recovered
        assert sum(int(k) * v for k, v in d[name]["delay_histogram"].items()) == agg.delay_sum
    assert stats.totals["decode"].erasures == stats.totals["baseline"].erasures
    assert stats.totals["decode"].lost <= stats.totals["baseline"].lost


def test_example_pattern_experiment(example_system, example_generator):
    # one trial through the fixed pattern reproduces the worked example
    stats = run_experiment(example_system, example_generator, PatternChannel(MASK), 1, 1, gamma=GAMMA, L=1)
    dec = stats.per_trial[0]["decode"]
    assert dec.erasures == 12 and dec.lost == 0
    assert dec.negative == 5 and dec.terminal
    assert stats.totals["decode"].histogram[-1] == 5
    base = stats.per_trial[0]["baseline"]
    assert base.recovered + base.lost == 12


def test_soundness_violation_is_reported(small_code, monkeypatch):
    G, S = small_code
    frame = Frame.random(G, 2, SplitMix64(0))
    stream = ReceivedStream.from_codeword(G.k, 2, frame.blocks, [[True, False]] + [[False, False]] * 3)
    report = pipeline.Decoder(S, 1, stream.last).decode(stream)
    check_soundness(report, frame)
    report.values[0][0] = G.field.add(report.values[0][0], 1)
    with pytest.raises(SoundnessError, match="seed=17"):
        check_soundness(report, frame, 17)

    real = pipeline.check_soundness

    def corrupting(report, frame, seed=None):
        report.values[0] = [G.field.add(frame.blocks[0][0], 1)] + list(report.values[0][1:])
        real(report, frame, seed)

    monkeypatch.setattr(pipeline, "check_soundness", corrupting)
    with pytest.raises(SoundnessError):
        run_experiment(S, G, IID(0.1, seed=3), 2, 1)


def test_experiment_argument_checks(small_code, example_generator):
    G, S = small_code
    with pytest.raises(ValueError):
        run_experiment(S, G, IID(0.1), 0, 1)
    with pytest.raises(ShapeError):
        run_experiment(S, example_generator, IID(0.1), 1, 1)


def test_experiments_are_reproducible(small_code):
    G, S = small_code
    a = run_experiment(S, G, Burst(0.1, 0.4, seed=11), 30, 2).to_dict(include_trials=True)
    b = run_experiment(S, G, Burst(0.1, 0.4, seed=11), 30, 2).to_dict(include_trials=True)
    assert a == b
    c = run_experiment(S, G, Burst(0.1, 0.4, seed=12), 30, 2).to_dict(include_trials=True)
    assert c != a
