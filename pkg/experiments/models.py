"""
Experiments models.
"""
from django.db import models


class ResultRecord(models.Model):
    """
    One optimized (n, m, seed) instance of an experiment run.

    Rows are append-only: the payload is the serialized InstanceResult and
    is never rewritten. A rerun of a failed instance adds a new row.
    """

    STATUS_OK = 'ok'
    STATUS_FAILED = 'failed'

    STATUS_CHOICES = [
        (STATUS_OK, 'Completed'),
        (STATUS_FAILED, 'Failed'),
    ]

    config_hash = models.CharField(
        max_length=64,
        db_index=True,
        help_text='SHA-256 of the canonical run configuration'
    )

    instance_key = models.CharField(
        max_length=64,
        db_index=True,
        help_text='SHA-256 of (config hash, n, m, seed)'
    )

    n = models.PositiveIntegerField()
    m = models.PositiveIntegerField()

    # unsigned 64-bit seeds overflow SQLite integers
    seed = models.CharField(max_length=20)

    status = models.CharField(
        max_length=20,
        choices=STATUS_CHOICES,
        default=STATUS_OK
    )

    payload = models.JSONField(help_text='Serialized InstanceResult')

    error_message = models.TextField(
        blank=True,
        null=True,
        help_text='Error message if the instance failed'
    )

    version = models.CharField(max_length=20)

    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        verbose_name = 'Result Record'
        verbose_name_plural = 'Result Records'
        ordering = ['config_hash', 'n', 'm', 'id']

    def __str__(self):
        return f'{self.config_hash[:12]} n={self.n} m={self.m} seed={self.seed} ({self.status})'

    def save(self, *args, **kwargs):
        """Insert only."""
        if self.pk is not None:
            raise ValueError('Result records are append-only')
        super().save(*args, **kwargs)
