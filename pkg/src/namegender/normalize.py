"""Turn raw full names into lookup keys."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field

from .errors import EmptyNameError


@dataclass(frozen=True)
class NameKey:
    primary: str
    variants: tuple[str, ...] = field(default=())

    def candidates(self) -> tuple[str, ...]:
        """Lookup order: primary first, then variants."""
        return (self.primary,) + self.variants


def fold(text: str) -> str:
    """Lowercase, compatibility-decompose and drop combining marks and whitespace."""
    decomposed = unicodedata.normalize("NFKD", unicodedata.normalize("NFKD", text).lower())
    return "".join(
        ch for ch in decomposed
        if unicodedata.category(ch) != "Mn" and not ch.isspace()
    )


def extract_first_name(full_name: str) -> NameKey:
    tokens = full_name.split()
    if not tokens:
        raise EmptyNameError("name is empty")
    token = tokens[0]
    primary = fold(token)
    if not primary:
        raise EmptyNameError(f"first token {token!r} has no letters left after folding")

    variants: list[str] = []
    if "-" in primary:
        variants.extend(part for part in primary.split("-") if part)
    unfolded = unicodedata.normalize("NFC", token.lower())
    variants.append(unfolded)

    seen = {primary}
    unique = []
    for v in variants:
        if v not in seen:
            seen.add(v)
            unique.append(v)
    return NameKey(primary, tuple(unique))


def image_query(full_name: str) -> str:
    """Collapse whitespace in a full name, keeping case and punctuation."""
    query = " ".join(full_name.split())
    if not query:
        raise EmptyNameError("name is empty")
    return query
