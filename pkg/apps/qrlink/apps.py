from django.apps import AppConfig


class QrlinkConfig(AppConfig):
    name = 'qrlink'
