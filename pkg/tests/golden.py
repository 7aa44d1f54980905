"""CLI invocations with fixed seeds whose reports are checked for content and
for run-to-run reproducibility."""
import io
import json
from pathlib import Path

from geomeasure.cli import main

FIX = Path(__file__).parent / "fixtures"

GOLDEN = {
    "gm-w": ["gm", "--builder", "w"],
    "gm-ghz4": ["gm", "--builder", "ghz", "--m", "4"],
    "gm-ghz5-power": ["gm", "--builder", "ghz", "--m", "5", "--method", "power", "--seed", "1"],
    "gm-qutrit": ["gm", "--builder", "qutrit-ghz", "--abc", "1/3,2/3,2/3"],
    "gm-w-file-embed": ["gm", str(FIX / "w_state.json"), "--method", "embed", "--seed", "2"],
    "spectrum-w": ["spectrum", str(FIX / "w_tensor.json")],
    "spectrum-zero": ["spectrum", str(FIX / "zero_tensor.json")],
    "spectrum-qutrit": ["spectrum", str(FIX / "qutrit_ghz_tensor.json")],
    "power-w": ["power", str(FIX / "w_tensor.json"), "--seed", "7"],
    "power-w-small-alpha": ["power", str(FIX / "w_tensor.json"), "--seed", "7", "--alpha", "0.01"],
    "power-random444": ["power", str(FIX / "random444.json"), "--seed", "3"],
    "validate-w-state": ["validate", str(FIX / "w_state.json")],
    "validate-negative": ["validate", str(FIX / "negative_tensor.json")],
    "validate-qutrit": ["validate", str(FIX / "qutrit_ghz_tensor.json")],
}


def run(argv):
    """(exit code, parsed stdout report, raw stdout, stderr)."""
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    text = out.getvalue()
    return code, json.loads(text), text, err.getvalue()
