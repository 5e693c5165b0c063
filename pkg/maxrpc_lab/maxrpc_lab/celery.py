import os
from celery import Celery

# Set the default Django settings module for the 'celery' program.
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "maxrpc_lab.settings")

app = Celery("maxrpc_lab")

# namespace='CELERY' means all celery-related config keys
# should have a `CELERY_` prefix.
app.config_from_object("django.conf:settings", namespace="CELERY")

# Load task modules from all registered Django app configs.
app.autodiscover_tasks()

# cd maxrpc_lab
# celery -A maxrpc_lab worker -l info
