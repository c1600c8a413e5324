from django.apps import AppConfig


class MarkovConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'markov'
    verbose_name = 'Markov fraud model'
