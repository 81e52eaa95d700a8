from django.apps import AppConfig


class ControllabilityConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'controllability'
    verbose_name = 'Controllability'
