import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import assert_valid_state
from trisample import (DyckEncoder, DyckPair, ExactChainAnalyzer, FixedOrientationSampler,
                       FlipSampler, enumerate_dyck_pairs)
from trisample.errors import ValidationError


def test_params_roundtrip():
    est = FixedOrientationSampler(chain="cr", n_steps=10, random_state=3)
    assert est.get_params() == {"chain": "cr", "n_steps": 10, "random_state": 3}
    twin = clone(est).set_params(n_steps=20)
    assert twin.n_steps == 20 and est.n_steps == 10


def test_fixed_sampler(hexagon):
    est = FixedOrientationSampler(chain="tr", n_steps=300, random_state=11).fit(hexagon)
    a = est.sample(4)
    b = est.sample(4)
    assert [o.bits for o in a] == [o.bits for o in b]
    for o in a:
        assert_valid_state(o)
    assert len({o.bits for o in a}) > 1


def test_fixed_sampler_accepts_json(hexagon):
    est = FixedOrientationSampler(n_steps=5, random_state=0).fit(hexagon.to_json())
    assert est.triangulation_ == hexagon


def test_not_fitted():
    with pytest.raises(NotFittedError):
        FixedOrientationSampler().sample()
    with pytest.raises(NotFittedError):
        FlipSampler().sample()


def test_bad_params(hexagon):
    with pytest.raises(ValidationError):
        FixedOrientationSampler(chain="ef").fit(hexagon)
    with pytest.raises(ValidationError):
        FixedOrientationSampler(n_steps=-1).fit(hexagon)
    with pytest.raises(ValidationError):
        FlipSampler(n_internal=0).fit()
    with pytest.raises(ValidationError):
        FlipSampler(n_internal=3).fit(DyckPair([1, -1], [1, -1]))


@pytest.mark.parametrize("chain", ["ef", "dk"])
def test_flip_sampler(chain):
    est = FlipSampler(n_internal=4, chain=chain, n_steps=400, random_state=5).fit()
    states = est.sample(3)
    assert all(s.is_valid() and s.n_internal == 4 for s in states)
    again = est.sample(3)
    assert [s.canonical_code() for s in states] == [s.canonical_code() for s in again]


def test_dyck_encoder_roundtrip():
    pairs = enumerate_dyck_pairs(3)
    enc = DyckEncoder().fit()
    states = enc.inverse_transform(pairs)
    assert enc.transform(states) == pairs
    assert enc.fit_transform(states) == pairs
    assert enc.inverse_transform([pairs[0].key])[0].canonical_code() == states[0].canonical_code()


def test_analyzer_fixed(hexagon):
    an = ExactChainAnalyzer(chain="cr", eps=0.01, tmax=2000).fit(hexagon)
    assert len(an.space_) == 18
    assert an.matrix_.is_uniform_stationary()
    assert an.tv_[an.mixing_time_] <= 0.01
    assert an.predict([an.space_.keys[3]]) == [an.space_.keys[3]]


def test_analyzer_psi():
    an = ExactChainAnalyzer(chain="dk", tmax=500).fit(3)
    assert len(an.space_) == 14 and an.diameter_ == 3
    pair = DyckPair.from_key(an.space_.keys[0])
    assert an.predict([pair, pair.to_dict()]) == [pair.key, pair.key]
    with pytest.raises(ValidationError):
        ExactChainAnalyzer(chain="dk").fit("three")
    with pytest.raises(ValidationError):
        ExactChainAnalyzer(chain="xx").fit(3)
