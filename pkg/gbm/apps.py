from django.apps import AppConfig


class GbmConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gbm'
    verbose_name = 'Gradient boosted trees'
