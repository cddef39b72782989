from django.db import migrations, models
import django.db.models.deletion


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        ('passport', '0001_initial'),
    ]

    operations = [
        migrations.CreateModel(
            name='DeskCheck',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('desk_id', models.CharField(max_length=32, verbose_name='desk')),
                ('airport', models.CharField(max_length=3, verbose_name='airport')),
                ('checkpoint', models.CharField(choices=[('DEPARTURE', 'Departure'), ('ARRIVAL', 'Arrival')], max_length=16, verbose_name='checkpoint')),
                ('started_at', models.BigIntegerField(verbose_name='started at')),
                ('outcome', models.CharField(blank=True, choices=[('PERMIT', 'Permit'), ('ISOLATE', 'Isolate'), ('LOCK_AND_ALERT', 'Lock and alert')], default='', max_length=16, verbose_name='outcome')),
                ('finished_at', models.BigIntegerField(blank=True, null=True, verbose_name='finished at')),
                ('device', models.ForeignKey(blank=True, null=True, on_delete=django.db.models.deletion.SET_NULL, related_name='desk_checks', to='passport.device', verbose_name='device')),
            ],
            options={
                'ordering': ('started_at', 'id'),
            },
        ),
        migrations.CreateModel(
            name='PoliceAlert',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('airport', models.CharField(max_length=3, verbose_name='airport')),
                ('device_id', models.CharField(max_length=64, verbose_name='device id')),
                ('reason', models.CharField(max_length=64, verbose_name='reason')),
                ('raised_at', models.BigIntegerField(verbose_name='raised at')),
                ('desk_check', models.OneToOneField(on_delete=django.db.models.deletion.CASCADE, related_name='police_alert', to='immigration.deskcheck', verbose_name='desk check')),
            ],
            options={
                'ordering': ('raised_at', 'id'),
            },
        ),
    ]
