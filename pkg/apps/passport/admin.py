from django.contrib import admin, messages

from .models import Device, DeviceVisa


class DeviceVisaInline(admin.TabularInline):
    model = DeviceVisa
    extra = 0
    readonly_fields = ('visa_id', 'media_type', 'content_hash',
                       'destination_country',)
    exclude = ('data',)


@admin.register(Device)
class DeviceAdmin(admin.ModelAdmin):
    list_display = ('device_id', 'clock_offset_min', 'locked',
                    'presented_visa_id', 'updated_at',)
    list_filter = ('locked',)
    search_fields = ('device_id',)
    readonly_fields = ('passport_data',)
    inlines = [DeviceVisaInline]
    actions = ['unlock_devices']

    def unlock_devices(self, request, queryset):
        for device in queryset.filter(locked=True):
            device.unlock()
        self.message_user(request, 'Selected devices unlocked.', messages.SUCCESS)
    unlock_devices.short_description = 'Unlock selected devices'
