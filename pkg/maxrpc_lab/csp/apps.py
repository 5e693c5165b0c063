from django.apps import AppConfig


class CspConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "csp"

    def ready(self):
        import csp.signals
