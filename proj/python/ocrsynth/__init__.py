"""ocrsynth - synthetic OCR records (image + LaTeX label) and their metrics.

Thin Python layer over the native core: plans are plain dicts, reports are
dicts, images are PNG bytes.
"""

import json
import os
from pathlib import Path

from . import _core
from ._core import OcrsynthError, canonicalize, levenshtein, parse_tree

__version__ = _core.__version__

_bundled = Path(__file__).with_name("data")
if _bundled.is_dir() and not os.environ.get("OCRSYNTH_DATA_DIR"):
    _core.set_data_dir(str(_bundled))


def _plan_json(plan):
    if plan is None:
        return ""
    return plan if isinstance(plan, str) else json.dumps(plan)


def _jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line]


def resolve_plan(plan=None, overrides=()):
    """The full plan (every key, defaults filled in) after `key=value` overrides."""
    return json.loads(_core.resolve_plan(_plan_json(plan), list(overrides)))


def config_defaults():
    return {k: json.loads(v) for k, v in _core.config_keys_with_defaults()}


def plan_fingerprint(plan=None):
    return _core.plan_fingerprint(_plan_json(plan))


def generate_labels(kind, n, seed=0, plan=None):
    """kind: "english", "chem" or "numeric"."""
    return _core.generate_labels(kind, n, seed, _plan_json(plan))


def render_png(label, font=0, size=0, plan=None):
    return _core.render_png(label, font, size, _plan_json(plan))


def transform_png(png, seed=0, plan=None):
    """Returns (png_bytes, applied_transform_names)."""
    return _core.transform_png(png, seed, _plan_json(plan))


bold_png = _core.bold_png
pixelate_png = _core.pixelate_png


def evaluate(references, hypotheses, tokenizer="latex", smoothing=False):
    return json.loads(_core.evaluate(list(references), list(hypotheses), tokenizer, smoothing))


def edit_score(references, hypotheses):
    return _core.edit_score(list(references), list(hypotheses))


def bleu4(references, hypotheses, tokenizer="latex", smoothing=False):
    return _core.bleu4(list(references), list(hypotheses), tokenizer, smoothing)


def exact_match(references, hypotheses):
    return _core.exact_match(list(references), list(hypotheses))


def build_dataset(plan=None, output_root=None, jobs=1):
    """Builds the plan; returns {"manifest_sha256", "plan_fingerprint", "records"}."""
    plan = dict(plan or {})
    if output_root is not None:
        plan["output_root"] = str(output_root)
    sha, fingerprint, records = _core.build_dataset(json.dumps(plan), jobs)
    return {"manifest_sha256": sha, "plan_fingerprint": fingerprint, "records": records}


def read_manifest(root):
    return _jsonl(_core.read_manifest(str(root)))


def dataset_stats(root):
    return json.loads(_core.dataset_stats(str(root)))


def load_external(images_dir, labels_file, max_width=700):
    return _jsonl(_core.load_external(str(images_dir), str(labels_file), max_width))


def assign_split(record_id, seed=0, ratios=(0.9, 0.05, 0.05)):
    return _core.assign_split(record_id, *ratios, seed)


def run_cli(*args):
    """Runs the command line in-process; returns (status, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
