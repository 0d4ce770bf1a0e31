import numpy as np

from superop_sensing import (build_blockwise_design, build_random_design,
                             random_channel, simulate_measurements)
from superop_sensing.serialize import (load_design, load_measurements,
                                       load_superoperator, save_design,
                                       save_measurements, save_superoperator)


def test_superoperator_roundtrip(tmp_path):
    s = random_channel(4, 3, seed=1)
    save_superoperator(str(tmp_path), s, extra={"seed": 1})
    loaded = load_superoperator(str(tmp_path))
    assert loaded.dim_n == 4
    assert all(np.array_equal(a, b) for a, b in zip(s.plus_ops, loaded.plus_ops))
    assert loaded.minus_ops == []


def test_design_roundtrip_random_pairs(tmp_path):
    design = build_random_design(3, 7, "random", seed=2)
    save_design(str(tmp_path), design, seed=2)
    loaded = load_design(str(tmp_path))
    assert loaded.kind == "random_pairs" and loaded.dim_n == 3
    for (r1, o1), (r2, o2) in zip(design.pairs, loaded.pairs):
        assert np.array_equal(r1, r2) and np.array_equal(o1, o2)


def test_design_roundtrip_blockwise(tmp_path):
    design = build_blockwise_design(4, 9, "random", row_index=2, seed=3)
    save_design(str(tmp_path), design)
    loaded = load_design(str(tmp_path))
    assert loaded.row_index == 2
    assert all(np.array_equal(a, b) for a, b in
               zip(design.observables, loaded.observables))


def test_measurements_roundtrip(tmp_path):
    s = random_channel(4, 2, seed=4)
    design = build_blockwise_design(4, 11, "random", 0, seed=5)
    data = simulate_measurements(s, design, 1e-4, "physical", seed=6)
    save_measurements(str(tmp_path), data)
    loaded = load_measurements(str(tmp_path))
    assert loaded.sigma == 1e-4 and loaded.noise_mode == "physical"
    assert all(np.array_equal(a, b) for a, b in zip(data.values, loaded.values))

    pair_design = build_random_design(4, 13, "random", seed=7)
    pair_data = simulate_measurements(s, pair_design, 0.0, seed=8)
    out = tmp_path / "pairs"
    save_measurements(str(out), pair_data)
    loaded = load_measurements(str(out))
    assert np.array_equal(loaded.values, pair_data.values)
    assert loaded.values.dtype.kind == "f"
