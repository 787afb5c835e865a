import json

import numpy as np
import pytest

import imsnn


def test_isi_and_weights():
    assert imsnn.isi_update(0, False) == 1
    assert imsnn.isi_update(7, True) == 1
    assert imsnn.isi_update(3, False) == 4
    trace = imsnn.isi_trace(np.array([[0], [1], [0], [0], [1], [1]], dtype=np.uint8))
    assert trace[:, 0].tolist() == [1, 2, 1, 2, 3, 1]
    assert imsnn.gaussian_factor(10.0, 5.0, 10) == 1.0
    assert imsnn.gaussian_factor(15.0, 5.0, 10) == pytest.approx(np.exp(-0.5))


def test_membrane_and_probabilities():
    assert imsnn.membrane_step(0.5, 0.99, 0.6) == (0.0, True)
    v, spiked = imsnn.membrane_step(0.5, 0.99, 0.4)
    assert not spiked and v == pytest.approx(0.895)
    assert imsnn.membrane_step(5.0, 1.0, 0.0, can_spike=False) == (5.0, False)
    assert imsnn.output_probabilities([1e-30, 1e-30]) == pytest.approx([0.5, 0.5])
    loss, grad = imsnn.cross_entropy([2.0, 1.0, 1.0], 0)
    assert loss == pytest.approx(np.log(2.0))
    assert len(grad) == 3


def test_errors_carry_kind_and_exit_code():
    with pytest.raises(imsnn.Error) as info:
        imsnn.parse_architecture("784-0-10")
    assert info.value.kind == "parse"
    with pytest.raises(imsnn.Error) as info:
        imsnn.output_probabilities([-1.0, 0.0])
    assert info.value.kind == "degenerate-output"
    assert imsnn.exit_code_for("config") == 2
    assert imsnn.exit_code_for("cache-miss") == 3


def test_encoder_examples():
    raster = imsnn.encode([1.0])
    assert raster.shape == (100, 1)
    assert (np.flatnonzero(raster[:, 0]) + 1).tolist() == list(range(10, 101, 10))
    assert (np.flatnonzero(imsnn.encode([0.0])[:, 0]) + 1).tolist() == [36, 71]


def test_forward_backward_matches_oracle():
    rng = np.random.default_rng(3)
    net = imsnn.Network("6-5-4", "imsnn", seed=2, height_mean=0.35, height_std=0.6)
    for b in range(net.num_banks):
        for i in range(len(net.means(b))):
            net.set_shape(b, i, float(rng.uniform(1, 6)), float(rng.uniform(1, 4)))
    x = (rng.random((15, 6)) < 0.45).astype(np.uint8)
    fwd = imsnn.forward(net, x)
    assert [s.shape for s in fwd["spikes"]] == [(15, 6), (15, 5), (15, 4)]
    assert not fwd["spikes"][-1].any()
    grad = rng.normal(size=4).tolist()
    for mode in ("imsnn", "imsnn_c", "none"):
        fast = imsnn.backward(net, x, grad, mode=mode)
        slow = imsnn.oracle_backward(net, x, grad, mode=mode)
        for a, b in zip(fast["height_grads"], slow["height_grads"]):
            np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)
        assert fast["suppressed_sites"] == slow["suppressed_sites"]


def test_gradcheck_and_demo():
    net = imsnn.Network("10-5-3", "imsnn", seed=1, height_std=0.5)
    net.set_heights(1, np.abs(net.heights(1)))
    x = (np.random.default_rng(1).random((20, 10)) < 0.4).astype(np.uint8)
    report = imsnn.gradcheck(net, x, 1)
    assert report["regime"] == "ok"
    assert report["passed"], report
    demo = imsnn.demo()
    assert demo["passed"]
    assert np.array_equal(demo["conventional"], demo["matched"])
    assert demo["matched"].sum() > demo["shifted"].sum()


def test_model_round_trip(tmp_path):
    net = imsnn.Network("784-3c5-10", "snn", seed=9)
    text = net.to_json()
    assert json.loads(text)["variant"] == "snn"
    again = imsnn.Network.from_json(text)
    assert again.to_json() == text
    path = tmp_path / "model.json"
    imsnn.save_model(net, path)
    assert imsnn.load_model(path).to_json() == text
    assert net.layer_sizes == imsnn.parse_architecture("784-3c5-10")
