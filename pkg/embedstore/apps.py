from django.apps import AppConfig


class EmbedstoreConfig(AppConfig):
    name = 'embedstore'
    verbose_name = 'Sentence embeddings'
