import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from fixture_doc import build_ir_dict  # noqa: E402

from papersum.ir import load_ir  # noqa: E402


@pytest.fixture
def e2e_ir_dict():
    return build_ir_dict()


@pytest.fixture
def e2e_ir(e2e_ir_dict):
    return load_ir(e2e_ir_dict)
