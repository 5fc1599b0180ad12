from django.apps import AppConfig


class AmalgamationConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.amalgamation"
    verbose_name = "Amalgamation"
