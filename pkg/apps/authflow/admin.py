from django.contrib import admin

from .models import AuthImage, AuthSession, Credential, Otp


@admin.register(AuthSession)
class AuthSessionAdmin(admin.ModelAdmin):
    list_display = ('session_id', 'device', 'state', 'activated_at', 'ended_at',)
    list_filter = ('state',)
    list_select_related = ('device',)
    search_fields = ('session_id', 'device__device_id',)
    readonly_fields = ('state', 'captcha_text',)


@admin.register(Credential)
class CredentialAdmin(admin.ModelAdmin):
    list_display = ('username', 'device',)
    exclude = ('salt',)
    readonly_fields = ('password_hash',)


@admin.register(AuthImage)
class AuthImageAdmin(admin.ModelAdmin):
    list_display = ('device', 'index', 'image_hash',)
    list_select_related = ('device',)


@admin.register(Otp)
class OtpAdmin(admin.ModelAdmin):
    list_display = ('transaction_id', 'used', 'issued_at', 'used_at',)
    list_filter = ('used',)
    exclude = ('code',)
