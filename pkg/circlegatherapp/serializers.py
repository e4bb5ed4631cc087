from rest_framework import serializers

from .algorithm import ALGORITHMS
from .models import ForgeRecord, SimulationRun


class SimulationRunSerializer(serializers.ModelSerializer):
    n = serializers.SerializerMethodField()

    class Meta:
        model = SimulationRun
        fields = [
            "id",
            "initial_configuration",
            "n",
            "theta",
            "algorithm",
            "scheduler",
            "seed",
            "step_cap",
            "monitor",
            "outcome",
            "outcome_step",
            "gathered_point",
            "final_configuration",
            "rule_counts",
            "violation",
            "created_at",
        ]
        read_only_fields = fields

    def get_n(self, obj):
        return obj.initial().n


class SimulationRequestSerializer(serializers.Serializer):
    """Input for POST /runs/: a configuration text, or n to generate one."""

    config = serializers.CharField(required=False, allow_blank=False)
    n = serializers.IntegerField(required=False, min_value=1)
    theta = serializers.CharField(default="1/2")
    algorithm = serializers.ChoiceField(choices=sorted(ALGORITHMS), default="listing1")
    scheduler = serializers.CharField(default="full")
    seed = serializers.IntegerField(default=0)
    step_cap = serializers.IntegerField(required=False, min_value=1)
    monitor = serializers.BooleanField(default=False)

    def validate(self, attrs):
        if not attrs.get("config") and attrs.get("n") is None:
            raise serializers.ValidationError("Either 'config' or 'n' is required.")
        return attrs


class ForgeRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = ForgeRecord
        fields = [
            "id",
            "algorithm",
            "theta",
            "n",
            "seed",
            "variant",
            "certificate_json",
            "verified",
            "created_at",
        ]
        read_only_fields = fields


class ForgeRequestSerializer(serializers.Serializer):
    algorithm = serializers.ChoiceField(choices=sorted(ALGORITHMS))
    theta = serializers.CharField(default="1/4")
    n = serializers.IntegerField(required=False, min_value=1)
    auto_n = serializers.BooleanField(default=False)
    seed = serializers.IntegerField(default=0)
    max_samples = serializers.IntegerField(required=False, min_value=1)

    def validate(self, attrs):
        if attrs.get("n") is None and not attrs["auto_n"]:
            raise serializers.ValidationError("Either 'n' or 'auto_n' is required.")
        return attrs


class CompatRequestSerializer(serializers.Serializer):
    theta = serializers.CharField()
    min = serializers.IntegerField(default=2, min_value=1)


class GenConfigRequestSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=2)
    seed = serializers.IntegerField(default=0)


class DerandomizeRequestSerializer(serializers.Serializer):
    m = serializers.IntegerField(min_value=1)
    n = serializers.IntegerField(min_value=1)
    obstacles = serializers.CharField(allow_blank=True, default="", trim_whitespace=False)
