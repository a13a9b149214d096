from django.apps import AppConfig


class DocalignConfig(AppConfig):
    name = 'docalign'
    verbose_name = 'Document alignment'
