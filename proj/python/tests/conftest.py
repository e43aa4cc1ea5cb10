import os
import sys

# Under ctest, import the module from the build tree rather than an installed copy.
_root = os.environ.get("GENPATCH_PYROOT")
if _root:
    sys.meta_path[:] = [f for f in sys.meta_path if not type(f).__name__.startswith("ScikitBuild")]
    sys.path.insert(0, _root)
