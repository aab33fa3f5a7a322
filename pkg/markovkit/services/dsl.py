"""Diagram documents, certificates and level dumps as canonical JSON text."""

import hashlib
import json
import logging
from collections import Counter

from pydantic import BaseModel, Field, ValidationError

from markovkit.config import LEVELS_SCHEMA
from markovkit.errors import DiagramSyntaxError, DuplicateName, UnknownReference
from markovkit.models.diagram import DiagramDocument, MarkovDiagram
from markovkit.models.expansion import LevelState
from markovkit.models.verdicts import Certificate

logger = logging.getLogger(__name__)


class LevelDump(BaseModel):
    """File form of an expanded prefix; decompositions are re-checkable after loading."""

    schema_version: str = LEVELS_SCHEMA
    diagram_name: str
    diagram_hash: str
    levels: list[LevelState] = Field(default_factory=list)


def _location(loc: tuple) -> str:
    return ".".join(str(part) for part in loc) or "<document>"


def _load_json(text: str) -> object:
    if not text.strip():
        raise DiagramSyntaxError("empty document (missing start)", line=1, column=1)
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramSyntaxError(e.msg, line=e.lineno, column=e.colno) from e


class DiagramCodec:
    """Parse and serialize diagram documents and the artifacts derived from them."""

    @staticmethod
    def parse(text: str) -> DiagramDocument:
        """
        Parse a diagram document.

        Args:
            text: Document text (see docs/FORMAT.md)

        Returns:
            The parsed diagram in canonical order

        Raises:
            DiagramSyntaxError: malformed text or schema error (with line/column or field path)
            DuplicateName: two productions or two gluings share a name
            UnknownReference: a gluing names a production that does not exist
        """
        data = _load_json(text)
        if not isinstance(data, dict):
            raise DiagramSyntaxError("document must be an object")
        try:
            diagram = MarkovDiagram.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            if first["type"] == "missing":
                message = f"missing field '{first['loc'][-1]}'"
            else:
                message = first["msg"]
            raise DiagramSyntaxError(message, location=_location(first["loc"])) from e

        for kind, names in (
            ("production", [p.name for p in diagram.productions]),
            ("gluing", [g.name for g in diagram.gluings]),
        ):
            for name, count in Counter(names).items():
                if count > 1:
                    raise DuplicateName(name, kind)
        for gluing in diagram.gluings:
            for ref in (gluing.src, gluing.dst):
                if ref not in diagram.production_map:
                    raise UnknownReference(ref, f"gluing '{gluing.name}'")

        logger.debug("Parsed diagram %s", diagram.name)
        return diagram

    @staticmethod
    def serialize(doc: DiagramDocument) -> str:
        """Canonical text: fixed key order, sorted names and ids, two-space indent."""
        return doc.model_dump_json(indent=2) + "\n"

    @staticmethod
    def content_hash(doc: DiagramDocument) -> str:
        digest = hashlib.sha256(DiagramCodec.serialize(doc).encode("utf-8")).hexdigest()
        return f"sha256:{digest}"

    @staticmethod
    def serialize_certificate(certificate: Certificate) -> str:
        return certificate.model_dump_json(indent=2) + "\n"

    @staticmethod
    def load_certificate(text: str) -> Certificate:
        data = _load_json(text)
        try:
            return Certificate.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            raise DiagramSyntaxError(first["msg"], location=_location(first["loc"])) from e

    @staticmethod
    def serialize_levels(doc: DiagramDocument, levels: list[LevelState]) -> str:
        dump = LevelDump(
            diagram_name=doc.name,
            diagram_hash=DiagramCodec.content_hash(doc),
            levels=levels,
        )
        return dump.model_dump_json(indent=2) + "\n"

    @staticmethod
    def load_levels(text: str) -> LevelDump:
        """
        Load a level dump written by ``serialize_levels``.

        Raises:
            DiagramSyntaxError: malformed text, unknown schema or schema error
        """
        data = _load_json(text)
        try:
            dump = LevelDump.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            raise DiagramSyntaxError(first["msg"], location=_location(first["loc"])) from e
        if dump.schema_version != LEVELS_SCHEMA:
            raise DiagramSyntaxError(
                f"unsupported level schema {dump.schema_version!r}", location="schema_version"
            )
        return dump
