from django.contrib import admin, messages

from .exceptions import CloudError
from .models import (AirportCloud, Application, Blob, Booking, DeskCopy,
                     EmbassyCloud, Notification, PassportRecord, ReplicatedVisa,
                     Visa)


class ApplicationInline(admin.TabularInline):
    model = Application
    extra = 0
    readonly_fields = ('tracking_id', 'kind', 'applicant', 'status', 'resource_id',)


@admin.register(EmbassyCloud)
class EmbassyCloudAdmin(admin.ModelAdmin):
    list_display = ('authority_id', 'country', 'created_at',)
    exclude = ('secret',)
    inlines = [ApplicationInline]


@admin.register(PassportRecord)
class PassportRecordAdmin(admin.ModelAdmin):
    list_display = ('passport_no', 'cloud', 'bound_device', 'updated_at',)
    search_fields = ('passport_no', 'bound_device',)
    list_select_related = ('cloud',)
    readonly_fields = ('data',)
    actions = ['unbind']

    def unbind(self, request, queryset):
        for record in queryset.select_related('cloud'):
            try:
                record.cloud.unbind_passport(record.passport_no)
            except CloudError as e:
                self.message_user(request, e.message, messages.ERROR)
        self.message_user(request, 'Selected passports unbound.', messages.SUCCESS)
    unbind.short_description = 'Unbind selected passports from their device'


@admin.register(Visa)
class VisaAdmin(admin.ModelAdmin):
    list_display = ('visa_id', 'passport_no', 'issuing_country',
                    'destination_country', 'status',)
    list_filter = ('status', 'destination_country',)
    search_fields = ('visa_id', 'passport_no',)


@admin.register(Blob)
class BlobAdmin(admin.ModelAdmin):
    list_display = ('content_hash', 'cloud',)
    exclude = ('data',)


@admin.register(Notification)
class NotificationAdmin(admin.ModelAdmin):
    list_display = ('recipient', 'kind', 'cloud', 'created_at',)
    list_filter = ('kind',)


class ReplicatedVisaInline(admin.TabularInline):
    model = ReplicatedVisa
    extra = 0
    readonly_fields = ('visa_id', 'passport_no', 'image_hash', 'source_authority',)


class DeskCopyInline(admin.TabularInline):
    model = DeskCopy
    extra = 0
    readonly_fields = ('visa_id', 'checkpoint', 'content_hash', 'received_at',)


@admin.register(AirportCloud)
class AirportCloudAdmin(admin.ModelAdmin):
    list_display = ('airport', 'last_sync_date', 'updated_at',)
    inlines = [ReplicatedVisaInline, DeskCopyInline]


@admin.register(Booking)
class BookingAdmin(admin.ModelAdmin):
    list_display = ('passport_no', 'visa_id', 'airport', 'travel_date',)
    list_filter = ('airport',)
