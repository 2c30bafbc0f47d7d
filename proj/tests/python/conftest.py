import os
import sys

# Under ctest, import the in-tree build even when an editable install exists:
# its import hook would otherwise shadow PYTHONPATH.
_build = os.environ.get("RELENT_BUILD_PYTHON_DIR")
if _build:
    sys.meta_path[:] = [f for f in sys.meta_path if "ScikitBuild" not in type(f).__name__]
    sys.path.insert(0, _build)
    for name in [m for m in sys.modules if m == "relent" or m.startswith("relent.")]:
        del sys.modules[name]
