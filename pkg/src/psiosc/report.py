"""Deterministic JSON and CSV rendering of experiment results.

Rationals are written as ``"p/q"`` strings, keys keep a fixed order and the
CSV is derived from the JSON document alone, so re-rendering a saved JSON
file reproduces the CSV byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from pathlib import Path

from .lab import DensityReport, ExperimentResult

CSV_FIELDS = ("id", "sign_changes", "change_positions", "k", "psi1", "psi2", "in_Psi", "in_Phi")


def rat_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _plain(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return rat_str(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def density_dict(d: DensityReport) -> dict:
    return {
        "k": d.k, "samples": d.samples, "psi_hits": d.psi_hits, "phi_hits": d.phi_hits,
        "p_psi": d.p_psi, "p_phi": d.p_phi, "ci": d.ci, "band": d.band,
        "vacuous": d.vacuous, "ok": d.ok, "strict_ok": d.strict_ok, "symmetric": d.symmetric,
    }


def experiment_doc(result: ExperimentResult, density: DensityReport | None = None) -> dict:
    per_pair = []
    for p in result.pairs:
        entry = {
            "id": p.id,
            "sign_changes": p.sign_changes,
            "change_positions": list(p.change_positions),
            "degenerate": p.degenerate,
            "hits": [
                {"k": h.k, "psi1": h.psi1, "psi2": h.psi2, "in_Psi": h.in_Psi, "in_Phi": h.in_Phi}
                for h in p.hits
            ],
        }
        if p.error is not None:
            entry["error"] = p.error
        per_pair.append(entry)
    summary = dict(result.summary)
    if density is not None:
        summary["density"] = density_dict(density)
    summary["out_of_scope"] = (
        "Divergence of the measure series and the full-density statement are asymptotic; "
        "this report only measures recurring hits and finite-k densities."
    )
    return _plain({"config": result.config.to_dict(), "per_pair": per_pair, "summary": summary})


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


def csv_from_doc(doc: dict) -> str:
    """One row per (pair, ladder k)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for p in doc["per_pair"]:
        pos = " ".join(str(t) for t in p["change_positions"])
        for h in p["hits"]:
            w.writerow([p["id"], p["sign_changes"], pos, h["k"], h["psi1"], h["psi2"],
                        int(h["in_Psi"]), int(h["in_Phi"])])
    return buf.getvalue()


def output_name(command: str, seed: int, k: int, ext: str = "csv") -> str:
    return f"{command}-{seed}-{k}.{ext}"


def write_experiment(result: ExperimentResult, out_dir, density: DensityReport | None = None,
                     command: str = "experiment") -> tuple[Path, Path]:
    """Write ``<command>-<seed>-<kmax>.json`` and the matching ``.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = result.config
    kmax = max(cfg.k_ladder)
    text = to_json(experiment_doc(result, density))
    jpath = out / output_name(command, cfg.seed, kmax, "json")
    cpath = out / output_name(command, cfg.seed, kmax, "csv")
    jpath.write_text(text, encoding="ascii", newline="\n")
    cpath.write_text(csv_from_doc(json.loads(text)), encoding="ascii", newline="\n")
    return jpath, cpath


def rerender(json_path, csv_path=None) -> Path:
    """CSV for a saved JSON report; defaults to the same name with ``.csv``."""
    src = Path(json_path)
    dst = Path(csv_path) if csv_path else src.with_suffix(".csv")
    doc = json.loads(src.read_text(encoding="ascii"))
    dst.write_text(csv_from_doc(doc), encoding="ascii", newline="\n")
    return dst
