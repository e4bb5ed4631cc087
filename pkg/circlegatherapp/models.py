from django.db import models

from .configuration import Configuration, parse_configuration
from .formats import load_certificate
from .impossibility import Certificate


class SimulationRun(models.Model):
    """
    A finished simulation and its outcome.

    The run is reproducible from its stored parameters: initial
    configuration, theta, algorithm, scheduler spec, seed and step cap.
    """

    OUTCOME_CHOICES = [
        ("gathered", "Gathered"),
        ("step_cap_exceeded", "Step cap exceeded"),
        ("contract_violation", "Contract violation"),
    ]

    initial_configuration = models.TextField(help_text="One point token per line")
    theta = models.CharField(max_length=64, help_text="Visibility range as num/den of a turn")
    algorithm = models.CharField(max_length=64)
    scheduler = models.CharField(max_length=255)
    seed = models.IntegerField(default=0)
    step_cap = models.PositiveIntegerField(default=10000)
    monitor = models.BooleanField(default=False)
    outcome = models.CharField(max_length=32, choices=OUTCOME_CHOICES)
    outcome_step = models.PositiveIntegerField(default=0)
    gathered_point = models.CharField(max_length=64, blank=True)
    final_configuration = models.TextField(blank=True)
    rule_counts = models.JSONField(default=dict)
    violation = models.TextField(blank=True)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"{self.algorithm} n={self.initial().n} theta={self.theta}: {self.outcome}"

    def initial(self) -> Configuration:
        """
        Parse the stored initial configuration.

        Raises:
            ConfigurationError: If the stored text is malformed.
        """
        return parse_configuration(self.initial_configuration)

    def rule_share(self, rule: str) -> float:
        """
        Fraction of recorded moves that fired the given rule.

        Args:
            rule (str): Rule label such as "3" or "4c".

        Returns:
            float: Percentage between 0.0 and 100.0, rounded to two decimals;
                0.0 when no move was recorded.
        """
        total = sum(self.rule_counts.values())
        if total == 0:
            return 0.0
        return round(self.rule_counts.get(rule, 0) / total * 100, 2)


class ForgeRecord(models.Model):
    """A certificate produced by the forge, stored as its JSON document."""

    algorithm = models.CharField(max_length=64)
    theta = models.CharField(max_length=64)
    n = models.PositiveIntegerField()
    seed = models.IntegerField(default=0)
    variant = models.CharField(max_length=16)
    certificate_json = models.JSONField()
    verified = models.BooleanField(default=False)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at", "-id"]

    def __str__(self):
        return f"{self.variant} certificate against {self.algorithm} (n={self.n}, theta={self.theta})"

    def certificate(self) -> Certificate:
        """
        Rebuild the stored certificate.

        Raises:
            ValueError: If the stored document does not validate.
        """
        return load_certificate(self.certificate_json)
