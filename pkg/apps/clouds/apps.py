from django.apps import AppConfig


class CloudsConfig(AppConfig):
    name = 'clouds'
    verbose_name = 'Embassy and airport clouds'
