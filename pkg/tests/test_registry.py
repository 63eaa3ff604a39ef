import pytest

from biharm import registry
from biharm.enums import IdentityId
from biharm.identities import TERMS


def test_all_registered():
    assert len(registry) == len(IdentityId)
    assert {info.id for info in registry} == set(IdentityId)
    assert set(TERMS) == set(IdentityId)


@pytest.mark.parametrize(
    "key",
    [IdentityId.I3_3, int(IdentityId.I3_3), "I3_3", "i3_3", "hessian-form"],
)
def test_lookup(key):
    info = registry[key]
    assert info.id is IdentityId.I3_3
    assert info.name == "I3_3"
    assert info.label == "HESSIAN-FORM"
    assert registry.get(key) is info


@pytest.mark.parametrize("key", ["nope", 99, -1])
def test_lookup_missing(key):
    assert registry.get(key) is None
    with pytest.raises((KeyError, ValueError)):
        registry[key]


def test_lookup_bad_type():
    with pytest.raises(TypeError):
        registry[1.5]


def test_requirements():
    assert not registry["I3_18"].clamped
    for id in IdentityId:
        info = registry[id]
        assert info.surface == (id in (IdentityId.I3_8, IdentityId.I3_1))
        assert info.fourth_order == info.surface
        assert info.equation
        if id is not IdentityId.I3_18:
            assert info.clamped


def test_repr():
    assert repr(registry["I2_13"]) == "<IdentityInfo: I2_13 (LAPLACIAN-FORM)>"
