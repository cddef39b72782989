from django.db import migrations, models
import django.db.models.deletion
import django_countries.fields


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='Device',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('device_id', models.CharField(max_length=64, unique=True, verbose_name='device id')),
                ('clock_offset_min', models.IntegerField(default=0, verbose_name='clock offset (minutes)')),
                ('locked', models.BooleanField(default=False, verbose_name='locked')),
                ('passport_data', models.BinaryField(blank=True, null=True, verbose_name='passport')),
                ('presented_visa_id', models.CharField(blank=True, default='', max_length=64, verbose_name='presented visa')),
            ],
            options={
                'ordering': ('device_id',),
            },
        ),
        migrations.CreateModel(
            name='DeviceVisa',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('visa_id', models.CharField(max_length=64, verbose_name='visa id')),
                ('media_type', models.CharField(default='image/png', max_length=64, verbose_name='media type')),
                ('data', models.BinaryField(verbose_name='image bytes')),
                ('content_hash', models.CharField(max_length=64, verbose_name='content hash')),
                ('destination_country', django_countries.fields.CountryField(blank=True, max_length=2, verbose_name='destination')),
                ('device', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='device_visas', to='passport.device', verbose_name='device')),
            ],
            options={
                'ordering': ('device', 'visa_id'),
                'unique_together': {('device', 'visa_id')},
            },
        ),
    ]
