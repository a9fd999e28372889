from django.apps import AppConfig


class HypersurfacesConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'hypersurfaces'
    verbose_name = 'Hypersurfaces and biharmonic checks'
