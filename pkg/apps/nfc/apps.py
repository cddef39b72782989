from django.apps import AppConfig


class NfcConfig(AppConfig):
    name = 'nfc'
