"""The chunked output container: named payload blocks plus a reserved `info`
block carrying the canonical metadata document.

File layout (integers little-endian):

    magic            8 bytes: 50 44 43 31 0D 0A 1A 0A  ("PDC1" + tail that
                     catches line-ending and charset mangling)
    format_version   u32 = 1
    toc_offset       u64
    payloads         raw block bytes, concatenated in write order
    TOC              u32 entry count, then per entry:
                     u16 name length, name UTF-8, u64 offset, u64 length,
                     u32 crc32c of the payload
    trailer          u32 crc32c over the TOC bytes

The TOC sits at the end so payloads stream out without buffering; readers
seek straight to it, so extracting `info` touches only the TOC plus that
one block regardless of file size.
"""

from __future__ import annotations

import io
import os
import struct
from typing import BinaryIO, Iterable, Mapping, Union

from . import options
from .crc import crc32c
from .metadata import MetadataDictionary
from .errors import (
    BadMagic,
    ChecksumMismatch,
    CorruptContainer,
    DuplicateBlock,
    MissingInfo,
    ReservedNameMisuse,
    UnknownBlock,
    UnsupportedVersion,
    WriteFailure,
)

MAGIC = b"PDC1\r\n\x1a\n"
FORMAT_VERSION = 1
INFO_BLOCK = "info"

_HEADER = struct.Struct("<8sIQ")
_TOC_ENTRY_TAIL = struct.Struct("<QQI")
_U16 = struct.Struct("<H")
_U32 = struct.Struct("<I")

BlockSource = Union[Mapping[str, bytes], Iterable[tuple[str, bytes]]]


def _normalize_blocks(blocks: BlockSource) -> list[tuple[str, bytes]]:
    pairs = list(blocks.items()) if isinstance(blocks, Mapping) else list(blocks)
    seen = set()
    for name, payload in pairs:
        if name in seen:
            raise DuplicateBlock(f"block {name!r} given twice")
        seen.add(name)
        if not isinstance(payload, (bytes, bytearray, memoryview)):
            raise TypeError(f"payload of block {name!r} must be bytes")
    return [(name, bytes(payload)) for name, payload in pairs]


def _check_info_canonical(payload: bytes) -> None:
    try:
        text = payload.decode("utf-8")
        parsed = options.parse_options(text)
    except Exception as exc:
        raise ReservedNameMisuse(f"info payload is not a canonical options "
                                 f"document: {exc}") from None
    if options.emit_canonical(parsed) != text:
        raise ReservedNameMisuse("info payload is not in canonical form")


def write_container(path, blocks: BlockSource) -> dict[str, int]:
    """Write the container; returns each block's crc32c by name.

    Rewriting the same blocks yields byte-identical files.
    """
    pairs = _normalize_blocks(blocks)
    for name, payload in pairs:
        if name == INFO_BLOCK:
            _check_info_canonical(payload)
    checksums: dict[str, int] = {}
    offset = _HEADER.size
    toc_parts = [_U32.pack(len(pairs))]
    body_parts = []
    for name, payload in pairs:
        encoded = name.encode("utf-8")
        if len(encoded) > 0xFFFF:
            raise ValueError(f"block name too long: {name[:32]!r}...")
        crc = crc32c(payload)
        checksums[name] = crc
        toc_parts.append(_U16.pack(len(encoded)) + encoded
                         + _TOC_ENTRY_TAIL.pack(offset, len(payload), crc))
        body_parts.append(payload)
        offset += len(payload)
    toc = b"".join(toc_parts)
    data = (_HEADER.pack(MAGIC, FORMAT_VERSION, offset)
            + b"".join(body_parts) + toc + _U32.pack(crc32c(toc)))
    try:
        with open(path, "wb") as handle:
            handle.write(data)
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc
    return checksums


class ContainerReader:
    """Seek-based reader: loads the TOC once, then reads blocks on demand.

    Accepts a path or an open binary file (the latter lets callers meter
    the bytes actually read).
    """

    def __init__(self, source: Union[str, os.PathLike, BinaryIO]):
        if hasattr(source, "read"):
            self._file: BinaryIO = source
            self._owns_file = False
        else:
            try:
                self._file = open(source, "rb")
            except OSError as exc:
                raise CorruptContainer(f"cannot open {source}: {exc}") from exc
            self._owns_file = True
        try:
            self._load_toc()
        except Exception:
            self.close()
            raise

    def _load_toc(self) -> None:
        header = self._file.read(_HEADER.size)
        if len(header) < _HEADER.size or header[:8] != MAGIC:
            raise BadMagic("not a container file (bad magic)")
        _, version, toc_offset = _HEADER.unpack(header)
        if version != FORMAT_VERSION:
            raise UnsupportedVersion(f"format version {version} is not supported")
        size = self._file.seek(0, io.SEEK_END)
        if not _HEADER.size <= toc_offset <= size - 8:
            raise CorruptContainer("table of contents offset out of bounds")
        self._file.seek(toc_offset)
        tail = self._file.read(size - toc_offset)
        toc, (stored_crc,) = tail[:-4], _U32.unpack(tail[-4:])
        if crc32c(toc) != stored_crc:
            raise ChecksumMismatch("table of contents checksum mismatch")
        (count,) = _U32.unpack_from(toc, 0)
        pos = 4
        entries: dict[str, tuple[int, int, int]] = {}
        previous_end = _HEADER.size
        for _ in range(count):
            if pos + 2 > len(toc):
                raise CorruptContainer("truncated table of contents")
            (name_len,) = _U16.unpack_from(toc, pos)
            pos += 2
            if pos + name_len + _TOC_ENTRY_TAIL.size > len(toc):
                raise CorruptContainer("truncated table of contents")
            try:
                name = toc[pos:pos + name_len].decode("utf-8")
            except UnicodeDecodeError as exc:
                raise CorruptContainer(f"block name is not UTF-8: {exc}") from None
            pos += name_len
            offset, length, crc = _TOC_ENTRY_TAIL.unpack_from(toc, pos)
            pos += _TOC_ENTRY_TAIL.size
            if name in entries:
                raise CorruptContainer(f"block {name!r} listed twice")
            if offset < previous_end or offset + length > toc_offset:
                raise CorruptContainer(f"block {name!r} has bad bounds")
            previous_end = offset + length
            entries[name] = (offset, length, crc)
        if pos != len(toc):
            raise CorruptContainer("trailing bytes in table of contents")
        self._entries = entries

    def block_names(self) -> list[str]:
        return list(self._entries)

    def has_block(self, name: str) -> bool:
        return name in self._entries

    def block_crc(self, name: str) -> int:
        """Stored crc32c of a block (read_block verifies it against bytes)."""
        return self._entry(name)[2]

    def block_length(self, name: str) -> int:
        return self._entry(name)[1]

    def _entry(self, name: str) -> tuple[int, int, int]:
        try:
            return self._entries[name]
        except KeyError:
            raise UnknownBlock(f"no block named {name!r}") from None

    def read_block(self, name: str) -> bytes:
        offset, length, crc = self._entry(name)
        self._file.seek(offset)
        payload = self._file.read(length)
        if len(payload) != length:
            raise CorruptContainer(f"block {name!r} is truncated")
        if crc32c(payload) != crc:
            raise ChecksumMismatch(f"block {name!r} checksum mismatch")
        return payload

    def close(self) -> None:
        if self._owns_file:
            self._file.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def read_block(path, name: str) -> bytes:
    with ContainerReader(path) as reader:
        return reader.read_block(name)


def extract_info(path) -> MetadataDictionary:
    """The embedded provenance snapshot as a metadata dictionary.

    Reads only the TOC and the info block, never the payloads.
    """
    with ContainerReader(path) as reader:
        if not reader.has_block(INFO_BLOCK):
            raise MissingInfo("container has no info block")
        payload = reader.read_block(INFO_BLOCK)
    try:
        text = payload.decode("utf-8")
        parsed = options.parse_options(text)
    except Exception as exc:
        raise CorruptContainer(f"info block is not a valid options "
                               f"document: {exc}") from None
    return MetadataDictionary.from_options(parsed)
