from django.db import models
from django.utils import timezone


class BenchmarkRun(models.Model):
    """
    An archived benchmark run (``bench --record``).

    Attributes:
        dataset: path of the dataset directory that was benchmarked
        heuristic: base or improved
        mode: lp or ip
        epsilon: unreliability rating used for every instance
        instances: number of recognition problems
        mean_agr: mean agreement ratio over all instances
        total_time: seconds spent recognizing
        lp_time: seconds spent inside the LP solver
    """
    HEURISTIC_BASE = 'base'
    HEURISTIC_IMPROVED = 'improved'

    HEURISTIC_CHOICES = [
        (HEURISTIC_BASE, 'Observation counting'),
        (HEURISTIC_IMPROVED, 'Observation counting + observation landmarks'),
    ]

    MODE_CHOICES = [
        ('lp', 'LP relaxation'),
        ('ip', 'Integer program'),
    ]

    dataset = models.CharField(max_length=500)
    heuristic = models.CharField(max_length=20, choices=HEURISTIC_CHOICES, default=HEURISTIC_IMPROVED)
    mode = models.CharField(max_length=2, choices=MODE_CHOICES, default='lp')
    epsilon = models.FloatField(default=0.0)
    instances = models.PositiveIntegerField(default=0)
    mean_agr = models.FloatField(default=0.0)
    total_time = models.FloatField(default=0.0, help_text='Seconds')
    lp_time = models.FloatField(default=0.0, help_text='Seconds')
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        ordering = ['-created_at']
        indexes = [
            models.Index(fields=['heuristic', 'created_at'], name='recognition_run_heur_idx'),
        ]

    def __str__(self):
        return f"{self.get_heuristic_display()} on {self.dataset} ({self.created_at:%Y-%m-%d %H:%M})"

    @classmethod
    def record(cls, report, dataset: str) -> 'BenchmarkRun':
        """Store a BenchmarkReport with one BenchmarkLevel per summary row."""
        run = cls.objects.create(
            dataset=dataset,
            heuristic=report.heuristic,
            mode=report.mode,
            epsilon=report.epsilon,
            instances=len(report.instances),
            mean_agr=report.mean_agr,
            total_time=sum(level.total_time for level in report.levels),
            lp_time=sum(level.lp_time for level in report.levels),
        )
        BenchmarkLevel.objects.bulk_create([
            BenchmarkLevel(
                run=run,
                domain=level.domain,
                observability=level.observability,
                instances=level.instances,
                agr=level.agr,
                avg_h_omega=level.avg_h_omega,
                avg_rows=level.avg_rows,
                total_time=level.total_time,
                lp_time=level.lp_time,
            )
            for level in report.levels
        ])
        return run

    def as_dict(self, levels: bool = False) -> dict:
        data = {
            'id': self.pk,
            'dataset': self.dataset,
            'heuristic': self.heuristic,
            'mode': self.mode,
            'epsilon': self.epsilon,
            'instances': self.instances,
            'mean_agr': self.mean_agr,
            'total_time': self.total_time,
            'lp_time': self.lp_time,
            'created_at': self.created_at.isoformat(),
        }
        if levels:
            data['levels'] = [level.as_dict() for level in self.levels.all()]
        return data


class BenchmarkLevel(models.Model):
    """Aggregates of one run for one (domain, observability) pair."""
    run = models.ForeignKey(BenchmarkRun, on_delete=models.CASCADE, related_name='levels')
    domain = models.CharField(max_length=100)
    observability = models.PositiveSmallIntegerField()
    instances = models.PositiveIntegerField(default=0)
    agr = models.FloatField()
    avg_h_omega = models.FloatField(null=True, blank=True)
    avg_rows = models.FloatField(default=0.0)
    total_time = models.FloatField(default=0.0)
    lp_time = models.FloatField(default=0.0)

    class Meta:
        ordering = ['run', 'domain', 'observability']
        unique_together = ['run', 'domain', 'observability']

    def __str__(self):
        return f"{self.domain} @ {self.observability}%"

    def as_dict(self) -> dict:
        return {
            'domain': self.domain,
            'observability': self.observability,
            'instances': self.instances,
            'agr': self.agr,
            'avg_h_omega': self.avg_h_omega,
            'avg_rows': self.avg_rows,
            'total_time': self.total_time,
            'lp_time': self.lp_time,
        }
