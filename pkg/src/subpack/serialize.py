"""File formats: codewords, repair transcripts and audit reports.

Every document is JSON with sorted keys and carries a ``schema`` tag plus the
provenance record needed to rebuild the code (params, field modulus or lambda
table, seed, package version).  Symbols are fixed-width lowercase hex.
"""

import json
from fractions import Fraction

import numpy as np

from . import __version__
from .digits import CodeParams
from .errors import CapExceeded, ShapeMismatch, TranscriptMismatch

SCHEMA = {
    "rs_codeword": "subpack.rs-codeword/1",
    "array_codeword": "subpack.array-codeword/1",
    "rs_transcript": "subpack.rs-transcript/1",
    "array_transcript": "subpack.array-transcript/1",
    "report": "subpack.report/1",
}


def plain(obj):
    """Recursively convert Fractions, numpy scalars and tuples for JSON output."""
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else "%d/%d" % (obj.numerator, obj.denominator)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return plain(obj.tolist())
    return obj


def dumps(doc):
    return json.dumps(plain(doc), sort_keys=True, indent=2) + "\n"


def provenance(code):
    out = code.descriptor()
    out["version"] = __version__
    return out


def params_from(prov):
    d = prov["params"]
    return CodeParams(d["s"], d["m"], d["n"], d["k"])


def _hex_width(q, count):
    return max(1, len("%x" % (q ** count - 1)))


# --- payload packing --------------------------------------------------------

def bytes_to_digits(data, q, count):
    """Pack bytes into ``count`` base-q digits (least significant first)."""
    v = int.from_bytes(data, "big")
    if v >= q ** count:
        raise CapExceeded("payload of %d bytes does not fit in %d base-%d digits"
                          % (len(data), count, q))
    out = []
    for _ in range(count):
        v, d = divmod(v, q)
        out.append(d)
    return out


def digits_to_bytes(digits, q, length):
    v = 0
    for d in reversed(digits):
        v = v * q + int(d)
    return v.to_bytes(length, "big")


# --- RS ---------------------------------------------------------------------

def rs_codeword_doc(code, word, payload_bytes=None):
    E = code.E
    width = _hex_width(code.F.q, code.params.l)
    doc = {"schema": SCHEMA["rs_codeword"], "provenance": provenance(code),
           "nodes": ["%0*x" % (width, E.to_int(x)) for x in word]}
    if payload_bytes is not None:
        doc["payload_bytes"] = payload_bytes
    return doc


def rs_word_from_doc(code, doc):
    _expect(doc, "rs_codeword")
    _same_field(code, doc["provenance"])
    if len(doc["nodes"]) != code.params.n:
        raise ShapeMismatch("codeword file holds %d nodes, need %d" % (len(doc["nodes"]), code.params.n))
    return [code.E.from_int(int(h, 16)) for h in doc["nodes"]]


def rs_transcript_doc(code, transcript):
    return {"schema": SCHEMA["rs_transcript"], "provenance": provenance(code),
            "failed": transcript.failed,
            "responses": {str(j): list(v) for j, v in sorted(transcript.responses.items())}}


def rs_transcript_from_doc(code, doc):
    from .rs import RSTranscript
    _expect(doc, "rs_transcript")
    _same_field(code, doc["provenance"])
    return RSTranscript(int(doc["failed"]),
                        {int(j): [int(x) for x in v] for j, v in doc["responses"].items()})


def _same_field(code, prov):
    if hasattr(code, "E"):
        if list(prov["field"]["h"]) != list(code.E.h) or prov["field"]["q"] != code.F.q:
            raise TranscriptMismatch("file was written for a different field")
    elif [list(r) for r in code.lam] != prov["lambda"] or prov["q"] != code.q:
        raise TranscriptMismatch("file was written for a different lambda table")


def _expect(doc, kind):
    if doc.get("schema") != SCHEMA[kind]:
        raise TranscriptMismatch("expected schema %s, got %r" % (SCHEMA[kind], doc.get("schema")))


# --- array code -------------------------------------------------------------

def array_codeword_doc(code, word, payload_bytes=None):
    width = _hex_width(code.q, 1)
    doc = {"schema": SCHEMA["array_codeword"], "provenance": provenance(code),
           "nodes": ["".join("%0*x" % (width, int(v)) for v in row) for row in word]}
    if payload_bytes is not None:
        doc["payload_bytes"] = payload_bytes
    return doc


def array_word_from_doc(code, doc):
    _expect(doc, "array_codeword")
    _same_field(code, doc["provenance"])
    p = code.params
    width = _hex_width(code.q, 1)
    rows = doc["nodes"]
    if len(rows) != p.n or any(len(r) != width * p.l for r in rows):
        raise ShapeMismatch("codeword file does not match shape (%d, %d)" % (p.n, p.l))
    return np.array([[int(r[x:x + width], 16) for x in range(0, len(r), width)] for r in rows],
                    dtype=np.int64)


def _label(label):
    if label is None:
        return {}
    if label[0] == "coord":
        return {"coord": label[1]}
    return {"b": list(label)}


def array_transcript_doc(code, plan, responses):
    records = []
    for h in plan.helpers:
        R = responses[h.j]
        for g, a in enumerate(plan.reps):
            for si, slot in enumerate(h.slots):
                rec = {"helper": h.j, "group": int(a), "value": int(R[g, si])}
                rec.update(_label(slot.label))
                records.append(rec)
    return {"schema": SCHEMA["array_transcript"], "provenance": provenance(code),
            "failed": plan.failed, "mode": plan.mode, "records": records}


def array_responses_from_doc(code, plan, doc):
    _expect(doc, "array_transcript")
    _same_field(code, doc["provenance"])
    if doc["failed"] != plan.failed or doc["mode"] != plan.mode:
        raise TranscriptMismatch("transcript is for node %s (%s plan)" % (doc["failed"], doc["mode"]))
    out = {h.j: np.zeros((len(plan.reps), len(h.slots)), dtype=np.int64) for h in plan.helpers}
    index = {}
    for h in plan.helpers:
        for si, slot in enumerate(h.slots):
            key = (h.j, json.dumps(_label(slot.label), sort_keys=True))
            index[key] = si
    groups = {int(a): g for g, a in enumerate(plan.reps)}
    seen = 0
    for rec in doc["records"]:
        lab = {k: rec[k] for k in ("b", "coord") if k in rec}
        key = (rec["helper"], json.dumps(lab, sort_keys=True))
        if key not in index or rec["group"] not in groups:
            raise TranscriptMismatch("unexpected record %r" % rec)
        out[rec["helper"]][groups[rec["group"]], index[key]] = rec["value"]
        seen += 1
    if seen != plan.bandwidth:
        raise TranscriptMismatch("transcript holds %d records, plan needs %d" % (seen, plan.bandwidth))
    return out


# --- reports ----------------------------------------------------------------

CSV_COLUMNS = ["construction", "s", "m", "n", "k", "l", "measured_max_bandwidth",
               "bound", "cutset", "gw", "meets_bound"]


def report_doc(kind, code_or_none, body, prov=None):
    doc = {"schema": SCHEMA["report"], "kind": kind,
           "provenance": prov if prov is not None else provenance(code_or_none)}
    doc.update(body)
    return doc
