from django.apps import AppConfig


class HelicesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'helices'
    verbose_name = 'BCV helices'
