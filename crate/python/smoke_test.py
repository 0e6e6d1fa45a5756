"""Smoke test for the weylinv_py extension module.

Builds the extension with cargo (unless WEYLINV_PY_LIB points at a built
library), loads it from a temporary directory and checks a few known groups.
Run directly or through pytest.
"""

import importlib
import os
import shutil
import subprocess
import sys
import sysconfig
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def _built_library() -> Path:
    override = os.environ.get("WEYLINV_PY_LIB")
    if override:
        return Path(override)
    subprocess.run(
        ["cargo", "build", "-p", "weylinv-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    target = Path(os.environ.get("CARGO_TARGET_DIR", ROOT / "target")) / "debug"
    for name in ("libweylinv_py.so", "libweylinv_py.dylib", "weylinv_py.dll"):
        if (target / name).exists():
            return target / name
    raise FileNotFoundError(f"no weylinv_py library under {target}")


def load_module():
    lib = _built_library()
    tmp = Path(tempfile.mkdtemp(prefix="weylinv_py_"))
    suffix = sysconfig.get_config_var("EXT_SUFFIX") or ".so"
    shutil.copy(lib, tmp / f"weylinv_py{suffix}")
    sys.path.insert(0, str(tmp))
    return importlib.import_module("weylinv_py")


def test_smoke():
    wi = load_module()

    assert wi.canonical_spec("(Sp(4) x Sp(4))/mu(2)") == "(Sp(4) x Sp(4)) / mu(2)[1,1]"
    assert wi.canonical_spec("PGO(8)") == "Spin(8) / mu(2)[(1,0)] x mu(2)[(0,1)]"

    r = wi.invariant_groups("(Sp(4) x Sp(4))/mu(2)")
    assert r["inv_ind"] == [2] and r["inv_sd"] == [2], r
    assert r["Dec"] == [[2, 0], [0, 2]], r

    assert wi.invariant_groups("SL(2)")["inv_ind"] == []
    assert wi.invariant_groups("PGO(8)")["Dec"] == [[4]]
    e6 = wi.invariant_groups("(E6 x E6) / mu(3)", mode="both")
    assert e6["inv_ind"] == [2, 6] and e6["dec_exactness"] == "exact", e6

    assert all(wi.newton_is_flat(t, n) for t in "AC" for n in range(1, 6))

    rows = wi.family_table("propB")
    assert rows and all(row[-1] for row in rows)

    try:
        wi.invariant_groups("SL(3) x")
    except wi.WeylInvError as e:
        assert "position 7" in str(e)
    else:
        raise AssertionError("parse error not raised")


if __name__ == "__main__":
    test_smoke()
    print("weylinv_py smoke test passed")
