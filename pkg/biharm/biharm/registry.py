"""
Catalogue of the weighted identities and of their requirements
"""

# Copyright (C) 2020 The biharm Team

from typing import Dict, Iterator, Optional, Union

from .enums import IdentityId


class IdentityInfo:
    """
    The description of a weighted identity.

    *clamped* is true if the identity needs ``u = 0`` and ``grad u = 0`` on
    the boundary, false if ``u = 0`` is enough.
    """

    def __init__(
        self,
        id: IdentityId,
        label: str,
        equation: str,
        fourth_order: bool = False,
        surface: bool = False,
        clamped: bool = True,
    ):
        self.id = id
        self.name = id.name
        self.label = label
        self.equation = equation
        self.fourth_order = fourth_order
        self.surface = surface
        self.clamped = clamped

    def __repr__(self) -> str:
        return f"<{self.__class__.__qualname__}: {self.name} ({self.label})>"


class IdentitiesRegistry:
    """
    Container for the information about the identities.
    """

    def __init__(self) -> None:
        self._by_id: Dict[IdentityId, IdentityInfo] = {}
        self._by_name: Dict[str, IdentityInfo] = {}

    def add(self, info: IdentityInfo) -> None:
        self._by_id[info.id] = info
        self._by_name[info.name] = info
        self._by_name[info.label] = info

    def __iter__(self) -> Iterator[IdentityInfo]:
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def __getitem__(self, key: Union[str, int]) -> IdentityInfo:
        if isinstance(key, str):
            return self._by_name[key.upper()]
        elif isinstance(key, int):
            return self._by_id[IdentityId(key)]
        else:
            raise TypeError(
                f"the key must be an identity id or a name, got {type(key)}"
            )

    def get(self, key: Union[str, int]) -> Optional[IdentityInfo]:
        try:
            return self[key]
        except (KeyError, ValueError):
            return None


registry = IdentitiesRegistry()

for info in [
    IdentityInfo(
        IdentityId.I2_13,
        "LAPLACIAN-FORM",
        "int Lu L(u w) = int |Lu|^2 w + 2a int |Du|^2 w/rho^2"
        " - 2a(a+2) int |du/drho|^2 w/rho^2"
        " + a(a+2)(n-2-a)(n-4-a)/2 int u^2 w/rho^4",
    ),
    IdentityInfo(
        IdentityId.I2_19,
        "RADIAL-GRADIENT",
        "int Lu du/drho w/rho ="
        " (n-4-a)/2 int |Du|^2 w/rho^2 + (a+2) int |du/drho|^2 w/rho^2",
    ),
    IdentityInfo(
        IdentityId.I3_3,
        "HESSIAN-FORM",
        "int D2u : D2(u w) = int |D2u|^2 w + a(n-a-1) int |Du|^2 w/rho^2"
        " - a(a+2) int |du/drho|^2 w/rho^2"
        " + a(a+2)(n-a-2)(n-a-4)/2 int u^2 w/rho^4",
    ),
    IdentityInfo(
        IdentityId.I3_8,
        "BILAPLACIAN-RADIAL",
        "int L2u du/drho rho w = -1/2 int_S |D2u|^2 <omega, N> rho w"
        " + (a+4-n)/2 int |D2u|^2 w - 2a int |d(Du)/drho|^2 w"
        " + a(n-a)/2 int |Du|^2 w/rho^2"
        " - a(a+2)(n-a)/2 int |du/drho|^2 w/rho^2",
        fourth_order=True,
        surface=True,
    ),
    IdentityInfo(
        IdentityId.I3_18,
        "RADIAL-HARDY",
        "int |d(u rho^((n-a)/2))/drho|^2 rho^(2-n) ="
        " int |du/drho|^2 rho^2 w - (n-a)^2/4 int u^2 w",
        clamped=False,
    ),
    IdentityInfo(
        IdentityId.I3_1,
        "CONVEXITY",
        "(a+4-n) int Lu L(u w) - 2 int L2u du/drho rho w ="
        " int_S |D2u|^2 <omega, N> rho w"
        " + 4a int |d(rho^((n-a-2)/2) Du)/drho|^2 rho^(2-n)"
        " + 2a(a+2)(n-a-2) int |d(rho^((n-a-4)/2) u)/drho|^2 rho^(2-n)",
        fourth_order=True,
        surface=True,
    ),
    IdentityInfo(
        IdentityId.I3_22,
        "HESSIAN-LAPLACIAN",
        "int Lu L(u w) = int D2u : D2(u w)",
    ),
]:
    registry.add(info)
