"""The flat metadata dictionary: full dotted keys mapped to canonical value
text, always iterated in key-byte order. This is what gets embedded in the
output container's `info` block and what replay reconstructs a job from."""

from __future__ import annotations

from typing import Iterator, Mapping

from .options import OptionsSet, emit_canonical, parse_value, value_to_text


class MetadataDictionary:
    """Immutable text-to-text snapshot of a job's resolved configuration."""

    def __init__(self, entries: Mapping[str, str]):
        self._entries = dict(entries)

    @classmethod
    def from_options(cls, options_set: OptionsSet) -> "MetadataDictionary":
        return cls({key.text: value_to_text(value) for key, value in options_set})

    def to_options(self) -> OptionsSet:
        out = OptionsSet()
        for key, text in self.items():
            out.set(key, parse_value(text))
        return out

    def emit(self) -> str:
        """Canonical options document; the single codec shared with configs."""
        return emit_canonical(self.to_options())

    def items(self) -> list[tuple[str, str]]:
        return sorted(self._entries.items(), key=lambda kv: kv[0].encode("utf-8"))

    def keys(self) -> list[str]:
        return [key for key, _ in self.items()]

    def get(self, key: str, default=None):
        return self._entries.get(key, default)

    def without(self, *keys: str) -> "MetadataDictionary":
        dropped = set(keys)
        return MetadataDictionary({k: v for k, v in self._entries.items()
                                   if k not in dropped})

    def __getitem__(self, key: str) -> str:
        return self._entries[key]

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self.items())

    def __eq__(self, other):
        if not isinstance(other, MetadataDictionary):
            return NotImplemented
        return self._entries == other._entries

    def __repr__(self):
        return f"MetadataDictionary({len(self._entries)} entries)"
