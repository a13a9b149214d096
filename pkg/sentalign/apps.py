from django.apps import AppConfig


class SentalignConfig(AppConfig):
    name = 'sentalign'
    verbose_name = 'Sentence alignment'
