from django.apps import AppConfig


class PartitionConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "apps.partition"
    verbose_name = "Partition"
