"""Certificate documents: sorted-key JSON with a schema header.

The document carries every certificate field, every ledger entry and, for
convenience, the expanded curve.  ``loads(dumps(c)) == c`` and
``dumps(loads(s)) == s`` for any document written by ``dumps``.
"""

from __future__ import annotations

import json
from dataclasses import fields

from .certificate import Certificate, LedgerEntry, expand_curve

SCHEMA = "hasse-sieve/certificate"
SCHEMA_VERSION = 1

_TUPLE_FIELDS = {"pairs", "primes", "norm_rep", "unit", "assumptions"}
_INT_FIELDS = {"n", "P", "p", "u", "iota", "nu", "l", "m", "L", "class_number", "Q", "seed"}
_OPTIONAL_INT_FIELDS = {"b0", "c0", "sign", "k"}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


class CertificateParseError(ValueError):
    pass


def to_dict(cert: Certificate, include_curve: bool = True) -> dict:
    body = {}
    for f in fields(Certificate):
        v = getattr(cert, f.name)
        if f.name == "ledger":
            v = [{"key": e.key, "status": e.status, "detail": e.detail} for e in v]
        elif f.name == "pairs":
            v = [list(p) for p in v]
        elif isinstance(v, tuple):
            v = list(v)
        body[f.name] = v
    doc = {"_schema": SCHEMA, "_version": SCHEMA_VERSION, "certificate": body}
    if include_curve:
        try:
            curve = expand_curve(cert)
        except ValueError:
            curve = None
        if curve is not None:
            doc["curve"] = {
                "equation": curve.describe(),
                "factors": [list(f) for f in curve.factors],
                "L": curve.L,
                "n": curve.n,
                "dense": [[i, j, k, c] for (i, j, k), c in sorted(curve.coefficients.items())],
            }
    return doc


def dumps(cert: Certificate, include_curve: bool = True) -> str:
    return json.dumps(to_dict(cert, include_curve), sort_keys=True, indent=2) + "\n"


def from_dict(doc: dict) -> Certificate:
    if not isinstance(doc, dict) or doc.get("_schema") != SCHEMA:
        raise CertificateParseError("not a certificate document (missing schema header)")
    if doc.get("_version") != SCHEMA_VERSION:
        raise CertificateParseError(f"unsupported schema version {doc.get('_version')!r}")
    body = doc.get("certificate")
    if not isinstance(body, dict):
        raise CertificateParseError("missing certificate section")
    names = {f.name for f in fields(Certificate)}
    missing = {f.name for f in fields(Certificate)} - body.keys()
    if missing:
        raise CertificateParseError(f"missing fields: {sorted(missing)}")
    extra = body.keys() - names
    if extra:
        raise CertificateParseError(f"unknown fields: {sorted(extra)}")
    kw = {}
    try:
        for name in names:
            v = body[name]
            if name == "ledger":
                v = tuple(LedgerEntry(e["key"], e["status"], e["detail"]) for e in v)
            elif name == "pairs":
                v = tuple((int(b), int(c)) for b, c in v)
            elif name in _TUPLE_FIELDS:
                v = tuple(v)
            kw[name] = v
        bad = [n for n in _INT_FIELDS if not _is_int(kw[n])]
        bad += [n for n in _OPTIONAL_INT_FIELDS if kw[n] is not None and not _is_int(kw[n])]
        bad += [n for n in ("primes", "norm_rep", "unit") if not all(_is_int(x) for x in kw[n])]
        if bad:
            raise ValueError(f"non-integer values in {sorted(bad)}")
    except (TypeError, KeyError, ValueError) as exc:
        raise CertificateParseError(f"malformed field: {exc}") from exc
    return Certificate(**kw)


def loads(text: str) -> Certificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CertificateParseError(f"unreadable document: {exc}") from exc
    return from_dict(doc)


def curve_section_matches(text: str) -> bool | None:
    """Does the stored curve agree with the certificate?  None if absent."""
    doc = json.loads(text)
    stored = doc.get("curve")
    if stored is None:
        return None
    fresh = to_dict(from_dict(doc)).get("curve")
    return stored == fresh
