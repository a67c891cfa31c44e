import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from narrascope import build_matrix, parse_prose, parse_screenplay

FIXTURES = Path(__file__).parent / "fixtures"

SAMPLE_SCENE = """[INT. CSI - EVIDENCE ROOM -- NIGHT]

(WARRICK opens the evidence package and holds the shoe up to the light.)

WARRICK BROWN: Somebody walked these floors twice.

(He turns the shoe over and taps the heel against the table.)

WARRICK BROWN: No lab tech signed this seal.
"""

SAMPLE_SCRIPT = """INT. STATION HOUSE - DAY

  SERGEANT COLE
Nobody leaves until the ledger is counted, page by page.

The clerk slides the heavy book across the desk and waits.

EXT. RIVER DOCK - NIGHT

COLE: The water took the rest of it, every last crate.

---BEAT---

COLE: Bring the lanterns closer before the tide turns again.

INT. STATION HOUSE - NIGHT

The ledger lies open, pages soaked through, ink running thin.

EXT. MARKET SQUARE - DAY

VENDOR: Fresh fish, straight off the morning boats, finest this side.

COLE: Save the patter, show me yesterday's delivery sheet first.
"""


@pytest.fixture(scope="session")
def marx_text():
    return (FIXTURES / "marx_fetishism.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def marx_doc(marx_text):
    return parse_prose(marx_text, title="marx")


@pytest.fixture(scope="session")
def marx_corpus(marx_doc):
    return build_matrix(marx_doc)


@pytest.fixture(scope="session")
def script_doc():
    return parse_screenplay(SAMPLE_SCRIPT, title="sample")


@pytest.fixture()
def marx_path():
    return FIXTURES / "marx_fetishism.txt"
