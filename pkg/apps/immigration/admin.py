from django.contrib import admin

from .models import DeskCheck, PoliceAlert


@admin.register(DeskCheck)
class DeskCheckAdmin(admin.ModelAdmin):
    list_display = ('airport', 'desk_id', 'checkpoint', 'device', 'outcome',
                    'started_at', 'finished_at',)
    list_filter = ('airport', 'checkpoint', 'outcome',)
    list_select_related = ('device',)


@admin.register(PoliceAlert)
class PoliceAlertAdmin(admin.ModelAdmin):
    list_display = ('airport', 'device_id', 'reason', 'raised_at', 'created_at',)
    list_filter = ('airport', 'reason',)
    search_fields = ('device_id',)
    readonly_fields = ('desk_check', 'airport', 'device_id', 'reason', 'raised_at',)
