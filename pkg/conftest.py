import os
import sys
from pathlib import Path

# The Django project root (where manage.py lives) holds the top-level apps.
sys.path.insert(0, str(Path(__file__).resolve().parent / "maxrpc_lab"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "maxrpc_lab.settings")

import django  # noqa: E402

django.setup()
