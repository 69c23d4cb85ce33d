import os
import subprocess
import sys

import pytest

from linfact import _impl, _pure


def _default_in_subprocess(**env):
    code = "from linfact._impl import DEFAULT_IMPL; print(DEFAULT_IMPL)"
    full = {k: v for k, v in os.environ.items() if k != "LINFACT_PURE"}
    full.update(PYTHONPATH=os.pathsep.join(sys.path), **env)
    return subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=full).stdout.strip()


def test_kernel_lookup():
    assert _impl.kernels("pure") is _pure
    assert _impl.kernels().IMPL == _impl.DEFAULT_IMPL
    with pytest.raises(ValueError):
        _impl.kernels("fortran")


def test_pure_always_available():
    assert "pure" in _impl.AVAILABLE


def test_compiled_preferred_when_built():
    if "compiled" not in _impl.AVAILABLE:
        pytest.skip("compiled core not built")
    assert _default_in_subprocess() == "compiled"


def test_env_forces_fallback():
    assert _default_in_subprocess(LINFACT_PURE="1") == "pure"


def test_debug_flag(monkeypatch):
    monkeypatch.delenv("LINFACT_DEBUG_ASSERT", raising=False)
    assert not _impl.debug_enabled()
    assert _impl.debug_enabled(True)
    monkeypatch.setenv("LINFACT_DEBUG_ASSERT", "0")
    assert not _impl.debug_enabled()
    monkeypatch.setenv("LINFACT_DEBUG_ASSERT", "1")
    assert _impl.debug_enabled()
    assert not _impl.debug_enabled(False)
