"""
Entry point into the serialization system.
"""

# Copyright (C) 2020 The biharm Team

from typing import Any, Callable, Optional, Union

from . import errors as e
from .enums import Format
from .proto import DumpersMap, DumperType, LoadersMap, LoaderType


class Dumper:
    """
    Convert a Python object to its external representation.

    JSON dumpers return a json-able object, CSV and TEXT dumpers return a
    string, BINARY dumpers return bytes.
    """

    globals: DumpersMap = {}

    def __init__(self, src: type, format: Format = Format.JSON):
        self.src = src
        self.format = format

    def dump(self, obj: Any) -> Any:
        raise NotImplementedError()

    @classmethod
    def register(
        cls, src: Union[type, str], format: Format = Format.JSON
    ) -> None:
        if not isinstance(src, (str, type)):
            raise TypeError(
                f"dumpers should be registered on classes, got {src} instead"
            )

        Dumper.globals[src, format] = cls

    @classmethod
    def json(cls, src: Union[type, str]) -> Callable[[DumperType], DumperType]:
        return cls._registrar(src, Format.JSON)

    @classmethod
    def csv(cls, src: Union[type, str]) -> Callable[[DumperType], DumperType]:
        return cls._registrar(src, Format.CSV)

    @classmethod
    def text(cls, src: Union[type, str]) -> Callable[[DumperType], DumperType]:
        return cls._registrar(src, Format.TEXT)

    @classmethod
    def binary(
        cls, src: Union[type, str]
    ) -> Callable[[DumperType], DumperType]:
        return cls._registrar(src, Format.BINARY)

    @classmethod
    def _registrar(
        cls, src: Union[type, str], format: Format
    ) -> Callable[[DumperType], DumperType]:
        def register_(dumper: DumperType) -> DumperType:
            dumper.register(src, format)
            return dumper

        return register_


class Loader:
    """
    Convert an external representation back to a Python object.

    Loaders are registered on a tag, which for JSON objects is the value of
    their ``type`` key.
    """

    globals: LoadersMap = {}

    def __init__(self, tag: str, format: Format = Format.JSON):
        self.tag = tag
        self.format = format

    def load(self, data: Any) -> Any:
        raise NotImplementedError()

    @classmethod
    def register(cls, tag: str, format: Format = Format.JSON) -> None:
        if not isinstance(tag, str):
            raise TypeError(
                f"loaders should be registered on tags, got {tag} instead"
            )

        Loader.globals[tag, format] = cls

    @classmethod
    def json(cls, tag: str) -> Callable[[LoaderType], LoaderType]:
        return cls._registrar(tag, Format.JSON)

    @classmethod
    def binary(cls, tag: str) -> Callable[[LoaderType], LoaderType]:
        return cls._registrar(tag, Format.BINARY)

    @classmethod
    def _registrar(
        cls, tag: str, format: Format
    ) -> Callable[[LoaderType], LoaderType]:
        def register_(loader: LoaderType) -> LoaderType:
            loader.register(tag, format)
            return loader

        return register_


def get_dumper(obj: Any, format: Format = Format.JSON) -> Dumper:
    """
    Return a dumper for *obj*, looking up its class hierarchy.
    """
    for cls in type(obj).__mro__:
        dcls = Dumper.globals.get((cls, format))
        if dcls is None:
            dcls = Dumper.globals.get((cls.__qualname__, format))
        if dcls is not None:
            return dcls(cls, format)

    raise e.InterfaceError(
        f"can't dump {type(obj).__name__} objects in {format.name} format"
    )


def get_loader(tag: str, format: Format = Format.JSON) -> Loader:
    lcls = Loader.globals.get((tag, format))
    if lcls is None:
        raise e.InterfaceError(
            f"can't load {tag!r} objects in {format.name} format"
        )
    return lcls(tag, format)


def dump(obj: Any, format: Format = Format.JSON) -> Any:
    return get_dumper(obj, format).dump(obj)


def load(
    data: Any, format: Format = Format.JSON, tag: Optional[str] = None
) -> Any:
    """
    Load an object from its external representation.

    If *tag* is not specified, a JSON object must carry a ``type`` key.
    """
    if tag is None:
        if not isinstance(data, dict) or "type" not in data:
            raise e.InterfaceError(
                "can't guess what to load: no 'type' key in the data"
            )
        tag = str(data["type"])

    return get_loader(tag, format).load(data)
