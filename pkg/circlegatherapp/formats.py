"""
File formats: JSON Lines traces, JSON certificates and derandomization
obstacle files.

Every angle, theta and coefficient is written as an exact "num/den" string.
JSON is produced by DRF serializers rendered with JSONRenderer, which gives
compact, key-ordered output, so equal inputs give byte-identical files.
"""

import io
import re
from fractions import Fraction

from rest_framework import serializers
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .algorithm import Decision, Rule
from .configuration import Configuration, format_token, parse_configuration
from .engine import RobotMove, TraceRecord
from .exceptions import AngleFormatError, ConfigurationError, DerandomizationError
from .geometry import Angle, format_fraction, parse_fraction
from .impossibility import Certificate, CertificateVariant, PerturbationCoefficients

_WHITESPACE = re.compile(r"\s+")


class FractionField(serializers.Field):
    """A rational written as "num/den"."""

    default_error_messages = {"invalid": "Expected an exact rational 'num/den', got {value!r}."}

    def to_representation(self, value):
        return format_fraction(Fraction(value.value if isinstance(value, Angle) else value))

    def to_internal_value(self, data):
        if not isinstance(data, str):
            self.fail("invalid", value=data)
        try:
            return parse_fraction(data)
        except AngleFormatError:
            self.fail("invalid", value=data)


class AngleField(FractionField):
    """A point on the circle written as "num/den" in [0, 1)."""

    def to_internal_value(self, data):
        return Angle(super().to_internal_value(data))


class ConfigurationField(serializers.Field):
    """A configuration as a list of tokens such as "1/10x2"."""

    def to_representation(self, value: Configuration):
        return [format_token(p, c) for p, c in value.positions]

    def to_internal_value(self, data):
        if not isinstance(data, list) or not all(isinstance(t, str) for t in data):
            raise serializers.ValidationError("Expected a list of point tokens.")
        try:
            return parse_configuration("\n".join(data))
        except (ConfigurationError, AngleFormatError) as exc:
            raise serializers.ValidationError(str(exc))


class CoefficientsField(serializers.ListField):
    child = FractionField()

    def to_representation(self, value):
        return [self.child.to_representation(v) for v in value]

    def to_internal_value(self, data):
        return PerturbationCoefficients(tuple(super().to_internal_value(data)))


class ChecksField(serializers.Field):
    """Verification checks as [{"name": ..., "passed": ...}, ...]."""

    def to_representation(self, value):
        return [{"name": name, "passed": passed} for name, passed in value]

    def to_internal_value(self, data):
        try:
            return tuple((str(item["name"]), bool(item["passed"])) for item in data)
        except (TypeError, KeyError):
            raise serializers.ValidationError("Expected a list of {name, passed} objects.")


class TraceHeaderSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1)
    theta = FractionField()
    algorithm = serializers.CharField()
    scheduler = serializers.CharField()
    seed = serializers.IntegerField()
    step_cap = serializers.IntegerField(min_value=1)


class RobotMoveSerializer(serializers.Serializer):
    robot = serializers.IntegerField(min_value=0)
    position = AngleField()
    rule = serializers.ChoiceField(choices=[rule.value for rule in Rule])
    offset = AngleField()


class TraceRecordSerializer(serializers.Serializer):
    step = serializers.IntegerField(min_value=0)
    activated = serializers.ListField(child=serializers.IntegerField(min_value=0))
    moves = RobotMoveSerializer(many=True)
    configuration = ConfigurationField(read_only=True)
    positions = serializers.ListField(child=AngleField())

    def create(self, validated_data) -> TraceRecord:
        moves = tuple(
            RobotMove(m["robot"], m["position"], Rule(m["rule"]), m["offset"])
            for m in validated_data["moves"]
        )
        return TraceRecord(
            validated_data["step"],
            tuple(validated_data["activated"]),
            moves,
            tuple(validated_data["positions"]),
        )


class DecisionSerializer(serializers.Serializer):
    destination_offset = AngleField()
    rule = serializers.ChoiceField(choices=[rule.value for rule in Rule])
    contract_violation = serializers.CharField(allow_null=True, required=False)


class CertificateSerializer(serializers.Serializer):
    variant = serializers.ChoiceField(choices=[v.value for v in CertificateVariant])
    algorithm = serializers.CharField()
    theta = FractionField()
    n = serializers.IntegerField(min_value=1)
    gamma = CoefficientsField()
    configuration = ConfigurationField()
    decisions = DecisionSerializer(many=True, required=False)
    mover_index = serializers.IntegerField(min_value=0, allow_null=True, required=False)
    mover = AngleField(allow_null=True, required=False)
    target = AngleField(allow_null=True, required=False)
    gamma_other = CoefficientsField(allow_null=True, required=False)
    other = ConfigurationField(allow_null=True, required=False)
    other_mover = AngleField(allow_null=True, required=False)
    combined = ConfigurationField(allow_null=True, required=False)
    successor = ConfigurationField(allow_null=True, required=False)
    witness = AngleField(allow_null=True, required=False)
    sample = serializers.IntegerField(allow_null=True, required=False)
    checks = ChecksField()
    verified = serializers.BooleanField(read_only=True)

    def create(self, validated_data) -> Certificate:
        data = dict(validated_data)
        data["variant"] = CertificateVariant(data["variant"])
        data["decisions"] = tuple(
            Decision(d["destination_offset"], Rule(d["rule"]), d.get("contract_violation"))
            for d in data.get("decisions", ())
        )
        return Certificate(**data)


_renderer = JSONRenderer()


def render_json(data) -> bytes:
    return _renderer.render(data)


def parse_json(raw: bytes | str):
    if isinstance(raw, str):
        raw = raw.encode("utf-8")
    return JSONParser().parse(io.BytesIO(raw))


def _load(serializer_class, data):
    serializer = serializer_class(data=data)
    if not serializer.is_valid():
        raise ValueError(f"invalid {serializer_class.__name__}: {serializer.errors}")
    return serializer


def render_trace_header(**header) -> bytes:
    return render_json(TraceHeaderSerializer(header).data) + b"\n"


def render_trace_record(record: TraceRecord) -> bytes:
    return render_json(TraceRecordSerializer(record).data) + b"\n"


def render_trace(header: dict, records) -> bytes:
    """Whole trace file: header line, then one line per record."""
    return render_trace_header(**header) + b"".join(render_trace_record(r) for r in records)


class TraceWriter:
    """Streams a trace to an open binary file as records are produced."""

    def __init__(self, stream, **header):
        self.stream = stream
        self.stream.write(render_trace_header(**header))

    def __call__(self, record: TraceRecord) -> None:
        self.stream.write(render_trace_record(record))


def read_trace(raw: bytes | str) -> tuple[dict, list[TraceRecord]]:
    """
    Parse a trace file.

    Raises:
        ValueError: On an empty file or a line that does not validate.
    """
    if isinstance(raw, str):
        raw = raw.encode("utf-8")
    lines = [line for line in raw.splitlines() if line.strip()]
    if not lines:
        raise ValueError("trace file is empty")
    header = dict(_load(TraceHeaderSerializer, parse_json(lines[0])).validated_data)
    records = [_load(TraceRecordSerializer, parse_json(line)).save() for line in lines[1:]]
    return header, records


def render_certificate(cert: Certificate) -> bytes:
    return render_json(CertificateSerializer(cert).data) + b"\n"


def certificate_data(cert: Certificate) -> dict:
    return parse_json(render_json(CertificateSerializer(cert).data))


def load_certificate(raw) -> Certificate:
    """
    Rebuild a certificate from its JSON text (or already-parsed dict).

    Raises:
        ValueError: If the document does not validate.
    """
    data = raw if isinstance(raw, dict) else parse_json(raw)
    return _load(CertificateSerializer, data).save()


def parse_obstacles(text: str, n: int) -> list[list[tuple[Fraction, ...]]]:
    """
    Parse an obstacle file into the n obstacle sets.

    Each line is "<axis> <c_1> ... <c_n>" with a 1-based axis and "num/den"
    coordinates; '#' starts a comment.

    Raises:
        DerandomizationError: On a malformed line.
    """
    obstacles = [[] for _ in range(n)]
    for line_number, line in enumerate(text.splitlines(), start=1):
        fields = _WHITESPACE.split(line.split("#", 1)[0].strip())
        if fields == [""]:
            continue
        if len(fields) != n + 1:
            raise DerandomizationError(f"line {line_number}: expected an axis and {n} coordinates")
        try:
            axis = int(fields[0])
            point = tuple(parse_fraction(c) for c in fields[1:])
        except (ValueError, AngleFormatError) as exc:
            raise DerandomizationError(f"line {line_number}: {exc}")
        if not 1 <= axis <= n:
            raise DerandomizationError(f"line {line_number}: axis must be in 1..{n}")
        obstacles[axis - 1].append(point)
    return obstacles


def format_obstacles(obstacles) -> str:
    lines = []
    for axis, points in enumerate(obstacles, start=1):
        for point in points:
            lines.append(" ".join([str(axis)] + [format_fraction(c) for c in point]))
    return "".join(line + "\n" for line in lines)


def format_point(point) -> str:
    return "(" + ", ".join(format_fraction(c) for c in point) + ")"
