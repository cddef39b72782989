from django.db import migrations, models
import django.db.models.deletion
import django_fsm


class Migration(migrations.Migration):

    initial = True

    dependencies = [
        ('passport', '0001_initial'),
    ]

    operations = [
        migrations.CreateModel(
            name='Otp',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('code', models.CharField(max_length=12, verbose_name='code')),
                ('transaction_id', models.CharField(max_length=64, verbose_name='transaction id')),
                ('used', models.BooleanField(default=False, verbose_name='used')),
                ('issued_at', models.BigIntegerField(verbose_name='issued at')),
                ('used_at', models.BigIntegerField(blank=True, null=True, verbose_name='used at')),
            ],
            options={
                'ordering': ('id',),
            },
        ),
        migrations.CreateModel(
            name='Credential',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('username', models.CharField(max_length=150, verbose_name='username')),
                ('salt', models.BinaryField(verbose_name='password salt')),
                ('password_hash', models.CharField(max_length=64, verbose_name='password hash')),
                ('device', models.OneToOneField(on_delete=django.db.models.deletion.CASCADE, related_name='credential', to='passport.device', verbose_name='device')),
            ],
            options={
                'abstract': False,
            },
        ),
        migrations.CreateModel(
            name='AuthSession',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('session_id', models.CharField(max_length=32, unique=True, verbose_name='session id')),
                ('state', django_fsm.FSMField(choices=[('TIME_AUTH_PENDING', 'Time auth pending'), ('CREDENTIALS_PENDING', 'Credentials pending'), ('PASSPORT_VISIBLE', 'Passport visible'), ('IMAGE_AUTH_PENDING', 'Image auth pending'), ('VISA_VISIBLE', 'Visa visible'), ('EXPIRED', 'Expired'), ('TERMINATED', 'Terminated')], default='TIME_AUTH_PENDING', max_length=50, verbose_name='state')),
                ('activated_at', models.BigIntegerField(verbose_name='activated at')),
                ('ended_at', models.BigIntegerField(blank=True, null=True, verbose_name='ended at')),
                ('captcha_id', models.CharField(blank=True, default='', max_length=32, verbose_name='captcha id')),
                ('captcha_text', models.CharField(blank=True, default='', max_length=16, verbose_name='captcha text')),
                ('captcha_issued_at', models.BigIntegerField(blank=True, null=True, verbose_name='captcha issued at')),
                ('pending_image_index', models.PositiveSmallIntegerField(blank=True, null=True, verbose_name='prompted image')),
                ('device', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='sessions', to='passport.device', verbose_name='device')),
            ],
            options={
                'ordering': ('-id',),
            },
        ),
        migrations.CreateModel(
            name='AuthImage',
            fields=[
                ('id', models.AutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='created')),
                ('updated_at', models.DateTimeField(auto_now=True, verbose_name='updated')),
                ('index', models.PositiveSmallIntegerField(verbose_name='index')),
                ('image_hash', models.CharField(max_length=64, verbose_name='image hash')),
                ('answer_hash', models.CharField(max_length=64, verbose_name='answer hash')),
                ('device', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='auth_images', to='passport.device', verbose_name='device')),
            ],
            options={
                'ordering': ('device', 'index'),
                'unique_together': {('device', 'index')},
            },
        ),
        migrations.AddIndex(
            model_name='otp',
            index=models.Index(fields=['code', 'transaction_id'], name='authflow_otp_code_tx_idx'),
        ),
    ]
