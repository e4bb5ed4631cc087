# Generated by Django 5.2.8 on 2026-10-19 10:12

from django.db import migrations, models


class Migration(migrations.Migration):
    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="SimulationRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "initial_configuration",
                    models.TextField(help_text="One point token per line"),
                ),
                (
                    "theta",
                    models.CharField(
                        help_text="Visibility range as num/den of a turn",
                        max_length=64,
                    ),
                ),
                ("algorithm", models.CharField(max_length=64)),
                ("scheduler", models.CharField(max_length=255)),
                ("seed", models.IntegerField(default=0)),
                ("step_cap", models.PositiveIntegerField(default=10000)),
                ("monitor", models.BooleanField(default=False)),
                (
                    "outcome",
                    models.CharField(
                        choices=[
                            ("gathered", "Gathered"),
                            ("step_cap_exceeded", "Step cap exceeded"),
                            ("contract_violation", "Contract violation"),
                        ],
                        max_length=32,
                    ),
                ),
                ("outcome_step", models.PositiveIntegerField(default=0)),
                ("gathered_point", models.CharField(blank=True, max_length=64)),
                ("final_configuration", models.TextField(blank=True)),
                ("rule_counts", models.JSONField(default=dict)),
                ("violation", models.TextField(blank=True)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at", "-id"],
            },
        ),
        migrations.CreateModel(
            name="ForgeRecord",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                ("algorithm", models.CharField(max_length=64)),
                ("theta", models.CharField(max_length=64)),
                ("n", models.PositiveIntegerField()),
                ("seed", models.IntegerField(default=0)),
                ("variant", models.CharField(max_length=16)),
                ("certificate_json", models.JSONField()),
                ("verified", models.BooleanField(default=False)),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at", "-id"],
            },
        ),
    ]
