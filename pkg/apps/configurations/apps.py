from django.apps import AppConfig


class ConfigurationsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.configurations"
    verbose_name = "Configurations"
