import django.db.models.deletion
import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='BenchmarkRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('dataset', models.CharField(max_length=500)),
                ('heuristic', models.CharField(choices=[('base', 'Observation counting'), ('improved', 'Observation counting + observation landmarks')], default='improved', max_length=20)),
                ('mode', models.CharField(choices=[('lp', 'LP relaxation'), ('ip', 'Integer program')], default='lp', max_length=2)),
                ('epsilon', models.FloatField(default=0.0)),
                ('instances', models.PositiveIntegerField(default=0)),
                ('mean_agr', models.FloatField(default=0.0)),
                ('total_time', models.FloatField(default=0.0, help_text='Seconds')),
                ('lp_time', models.FloatField(default=0.0, help_text='Seconds')),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'ordering': ['-created_at'],
                'indexes': [models.Index(fields=['heuristic', 'created_at'], name='recognition_run_heur_idx')],
            },
        ),
        migrations.CreateModel(
            name='BenchmarkLevel',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('domain', models.CharField(max_length=100)),
                ('observability', models.PositiveSmallIntegerField()),
                ('instances', models.PositiveIntegerField(default=0)),
                ('agr', models.FloatField()),
                ('avg_h_omega', models.FloatField(blank=True, null=True)),
                ('avg_rows', models.FloatField(default=0.0)),
                ('total_time', models.FloatField(default=0.0)),
                ('lp_time', models.FloatField(default=0.0)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='levels', to='recognition.benchmarkrun')),
            ],
            options={
                'ordering': ['run', 'domain', 'observability'],
                'unique_together': {('run', 'domain', 'observability')},
            },
        ),
    ]
