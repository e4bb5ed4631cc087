from django.contrib import admin

from .models import ForgeRecord, SimulationRun


@admin.register(SimulationRun)
class SimulationRunAdmin(admin.ModelAdmin):
    list_display = ["id", "algorithm", "theta", "scheduler", "seed", "outcome", "outcome_step", "created_at"]
    list_filter = ["outcome", "algorithm"]


@admin.register(ForgeRecord)
class ForgeRecordAdmin(admin.ModelAdmin):
    list_display = ["id", "algorithm", "theta", "n", "variant", "verified", "created_at"]
    list_filter = ["variant", "verified"]
