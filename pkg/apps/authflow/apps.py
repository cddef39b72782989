from django.apps import AppConfig


class AuthflowConfig(AppConfig):
    name = 'authflow'

    def ready(self) -> None:
        import authflow.signals
