from django.apps import AppConfig


class SimnetConfig(AppConfig):
    name = 'simnet'
    verbose_name = 'Scenario engine'
