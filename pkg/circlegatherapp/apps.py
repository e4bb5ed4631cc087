from django.apps import AppConfig


class CircleGatherConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "circlegatherapp"
    verbose_name = "Circle gathering simulator"
