# Generated by Django 5.2.8 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='ResultRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('config_hash', models.CharField(db_index=True, help_text='SHA-256 of the canonical run configuration', max_length=64)),
                ('instance_key', models.CharField(db_index=True, help_text='SHA-256 of (config hash, n, m, seed)', max_length=64)),
                ('n', models.PositiveIntegerField()),
                ('m', models.PositiveIntegerField()),
                ('seed', models.CharField(max_length=20)),
                ('status', models.CharField(choices=[('ok', 'Completed'), ('failed', 'Failed')], default='ok', max_length=20)),
                ('payload', models.JSONField(help_text='Serialized InstanceResult')),
                ('error_message', models.TextField(blank=True, help_text='Error message if the instance failed', null=True)),
                ('version', models.CharField(max_length=20)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'verbose_name': 'Result Record',
                'verbose_name_plural': 'Result Records',
                'ordering': ['config_hash', 'n', 'm', 'id'],
            },
        ),
    ]
