from django.db import migrations, models
import django.db.models.deletion
import django_countries.fields
import django_fsm


def _stamps():
    return [
        ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
        ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
        ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
    ]


def _embassy_fk(related_name):
    return ('cloud', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name=related_name, to='clouds.embassycloud', verbose_name='embassy cloud'))


def _airport_fk(related_name):
    return ('cloud', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name=related_name, to='clouds.airportcloud', verbose_name='airport cloud'))


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        ('passport', '0001_initial'),
    ]

    operations = [
        migrations.CreateModel(
            name='EmbassyCloud',
            fields=_stamps() + [
                ('authority_id', models.CharField(max_length=32, unique=True, verbose_name='authority id')),
                ('country', django_countries.fields.CountryField(max_length=2, verbose_name='country')),
                ('secret', models.BinaryField(verbose_name='signing secret')),
            ],
            options={
                'ordering': ('authority_id',),
            },
        ),
        migrations.CreateModel(
            name='AirportCloud',
            fields=_stamps() + [
                ('airport', models.CharField(max_length=3, unique=True, verbose_name='airport')),
                ('last_sync_date', models.IntegerField(blank=True, null=True, verbose_name='last sync date')),
            ],
            options={
                'ordering': ('airport',),
            },
        ),
        migrations.CreateModel(
            name='Booking',
            fields=_stamps() + [
                ('passport_no', models.CharField(max_length=16, verbose_name='passport number')),
                ('visa_id', models.CharField(max_length=64, verbose_name='visa id')),
                ('airport', models.CharField(max_length=3, verbose_name='airport')),
                ('travel_date', models.IntegerField(verbose_name='travel date')),
            ],
            options={
                'ordering': ('travel_date', 'airport', 'visa_id'),
                'unique_together': {('passport_no', 'visa_id', 'airport', 'travel_date')},
            },
        ),
        migrations.CreateModel(
            name='Application',
            fields=_stamps() + [
                ('tracking_id', models.CharField(max_length=12, unique=True, verbose_name='tracking id')),
                ('kind', models.CharField(choices=[('PASSPORT_APPLICATION', 'Passport application'), ('VISA_APPLICATION', 'Visa application')], max_length=32, verbose_name='kind')),
                ('applicant', models.CharField(max_length=254, verbose_name='applicant')),
                ('status', django_fsm.FSMField(choices=[('SUBMITTED', 'Submitted'), ('APPROVED', 'Approved')], default='SUBMITTED', max_length=50, protected=True, verbose_name='status')),
                ('resource_id', models.CharField(blank=True, default='', max_length=64, verbose_name='issued artifact')),
                _embassy_fk('applications'),
            ],
            options={
                'ordering': ('-created_at',),
            },
        ),
        migrations.CreateModel(
            name='PassportRecord',
            fields=_stamps() + [
                ('passport_no', models.CharField(max_length=16, verbose_name='passport number')),
                ('data', models.BinaryField(verbose_name='canonical passport')),
                ('bound_device', models.CharField(blank=True, default='', max_length=64, verbose_name='bound device')),
                _embassy_fk('passports'),
            ],
            options={
                'ordering': ('passport_no',),
                'unique_together': {('cloud', 'passport_no')},
            },
        ),
        migrations.CreateModel(
            name='Visa',
            fields=_stamps() + [
                ('visa_id', models.CharField(max_length=64, unique=True, verbose_name='visa id')),
                ('passport_no', models.CharField(max_length=16, verbose_name='passport number')),
                ('issuing_country', django_countries.fields.CountryField(max_length=2, verbose_name='issuing country')),
                ('destination_country', django_countries.fields.CountryField(max_length=2, verbose_name='destination')),
                ('valid_from', models.IntegerField(verbose_name='valid from')),
                ('valid_to', models.IntegerField(verbose_name='valid to')),
                ('image_hash', models.CharField(max_length=64, verbose_name='image hash')),
                ('media_type', models.CharField(default='image/png', max_length=64, verbose_name='media type')),
                ('status', models.CharField(choices=[('ISSUED', 'Issued'), ('REVOKED', 'Revoked')], default='ISSUED', max_length=16, verbose_name='status')),
                _embassy_fk('visas'),
            ],
            options={
                'ordering': ('visa_id',),
            },
        ),
        migrations.CreateModel(
            name='Blob',
            fields=_stamps() + [
                ('content_hash', models.CharField(max_length=64, verbose_name='content hash')),
                ('data', models.BinaryField(verbose_name='data')),
                _embassy_fk('blobs'),
            ],
            options={
                'unique_together': {('cloud', 'content_hash')},
            },
        ),
        migrations.CreateModel(
            name='Notification',
            fields=_stamps() + [
                ('recipient', models.CharField(max_length=254, verbose_name='recipient')),
                ('kind', models.CharField(choices=[('PASSPORT_READY', 'Passport ready'), ('VISA_READY', 'Visa ready')], max_length=16, verbose_name='kind')),
                ('token', models.TextField(verbose_name='link token')),
                ('link', models.TextField(blank=True, default='', verbose_name='download link')),
                ('qr_text', models.TextField(blank=True, default='', verbose_name='QR payload')),
                _embassy_fk('notifications'),
            ],
            options={
                'ordering': ('id',),
            },
        ),
        migrations.CreateModel(
            name='ReplicatedVisa',
            fields=_stamps() + [
                ('visa_id', models.CharField(max_length=64, verbose_name='visa id')),
                ('passport_no', models.CharField(max_length=16, verbose_name='passport number')),
                ('image_hash', models.CharField(max_length=64, verbose_name='image hash')),
                ('source_authority', models.CharField(max_length=32, verbose_name='source authority')),
                ('valid_from', models.IntegerField(verbose_name='valid from')),
                ('valid_to', models.IntegerField(verbose_name='valid to')),
                _airport_fk('replicated'),
            ],
            options={
                'ordering': ('visa_id',),
                'unique_together': {('cloud', 'visa_id')},
            },
        ),
        migrations.CreateModel(
            name='DeskCopy',
            fields=_stamps() + [
                ('visa_id', models.CharField(max_length=64, verbose_name='visa id')),
                ('checkpoint', models.CharField(choices=[('DEPARTURE', 'Departure'), ('ARRIVAL', 'Arrival')], max_length=16, verbose_name='checkpoint')),
                ('content_hash', models.CharField(max_length=64, verbose_name='content hash')),
                ('received_at', models.BigIntegerField(default=0, verbose_name='received at')),
                _airport_fk('desk_copies'),
            ],
            options={
                'ordering': ('visa_id', 'checkpoint'),
                'unique_together': {('cloud', 'visa_id', 'checkpoint')},
            },
        ),
    ]
