"""
Protocol objects representing different implementations of the same classes.
"""

# Copyright (C) 2020 The biharm Team

from typing import Callable, Dict, Tuple, Type, Union
from typing import TYPE_CHECKING

import numpy as np
from typing_extensions import Protocol

from .enums import Format

if TYPE_CHECKING:
    from .adapt import Dumper, Loader
    from .jets import Jet

Array = np.ndarray


# Fields and integrands


class JetField(Protocol):
    """
    A scalar field which can be evaluated with its derivatives.

    All the fields in the package are exact (built on polynomial algebra).
    """

    @property
    def dim(self) -> int:
        ...

    @property
    def degree(self) -> int:
        ...

    def jet(self, x: Array, third: bool = False) -> "Jet":
        ...


# Return the integrand values at the given points (shape (m,) or (m, k))
Integrand = Callable[[Array], Array]


# Adaptation types

DumperType = Type["Dumper"]
DumpersMap = Dict[Tuple[Union[type, str], Format], DumperType]

LoaderType = Type["Loader"]
LoadersMap = Dict[Tuple[str, Format], LoaderType]
