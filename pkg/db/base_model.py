from django.db import models


class BaseModel(models.Model):
    """
    Base model for every CloudPass store row.
    The timestamps are wall-clock bookkeeping only, scenario logic reads
    virtual time from its own integer fields and never from these.
    """
    created_at = models.DateTimeField(
        auto_now_add=True, verbose_name='created')
    updated_at = models.DateTimeField(auto_now=True, verbose_name='updated')

    class Meta:
        abstract = True
