from rest_framework import serializers
from django.core.validators import MinValueValidator, MaxValueValidator

from apps.core.conf import setting
from apps.core.exceptions import InputError

EXPERIMENT_KINDS = ["hypercube", "torus", "regular", "er_giant"]
START_MODES = ["rank", "rho"]


def validated(serializer_cls, data):
    """Run a serializer and return its validated data; failures become InputError."""
    serializer = serializer_cls(data=data)
    if not serializer.is_valid():
        raise InputError(f"{serializer_cls.__name__}: {dict(serializer.errors)}")
    return serializer.validated_data


# ==============================
# FILE FORMATS
# ==============================
class EnvironmentFileSerializer(serializers.Serializer):
    alpha = serializers.FloatField(required=False, allow_null=True)
    seed = serializers.IntegerField(required=False, allow_null=True)
    depths = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    ranked = serializers.ListField(child=serializers.IntegerField(min_value=0), allow_empty=False)

    def validate_depths(self, value):
        if any(not w > 0 for w in value):
            raise serializers.ValidationError("Trap depths must be positive")
        return value

    def validate(self, attrs):
        if len(attrs["depths"]) != len(attrs["ranked"]):
            raise serializers.ValidationError("depths and ranked must have the same length")
        if sorted(attrs["ranked"]) != list(range(len(attrs["ranked"]))):
            raise serializers.ValidationError("ranked must be a permutation of the vertex ids")
        return attrs


class KParamsSerializer(serializers.Serializer):
    Z = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    u = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    tail_bound = serializers.FloatField(required=False, default=0.0, validators=[MinValueValidator(0)])

    def validate_Z(self, value):
        if any(not z > 0 for z in value):
            raise serializers.ValidationError("Z entries must be positive")
        return value

    def validate_u(self, value):
        if any(not x > 0 for x in value):
            raise serializers.ValidationError("u entries must be positive")
        return value

    def validate(self, attrs):
        if len(attrs["Z"]) != len(attrs["u"]):
            raise serializers.ValidationError("Z and u must have the same length")
        return attrs


# ==============================
# EXPERIMENT CONFIG
# ==============================
class GraphSpecSerializer(serializers.Serializer):
    kind = serializers.ChoiceField(choices=EXPERIMENT_KINDS)
    n = serializers.IntegerField(required=False, validators=[MinValueValidator(1), MaxValueValidator(30)])
    N = serializers.IntegerField(required=False, validators=[MinValueValidator(3)])
    d = serializers.IntegerField(required=False, validators=[MinValueValidator(1)])
    lam = serializers.FloatField(required=False)

    def validate(self, attrs):
        kind = attrs["kind"]
        needed = {
            "hypercube": ["n"],
            "torus": ["N", "d"],
            "regular": ["N", "d"],
            "er_giant": ["N", "lam"],
        }[kind]
        missing = [key for key in needed if key not in attrs]
        if missing:
            raise serializers.ValidationError(f"{kind} graph needs {', '.join(missing)}")
        if kind == "torus" and attrs["d"] > 4:
            raise serializers.ValidationError("torus dimension must be at most 4")
        if kind == "regular" and attrs["d"] < 3:
            raise serializers.ValidationError("random regular graphs need d >= 3")
        if kind == "er_giant" and not attrs["lam"] > 1:
            raise serializers.ValidationError("er_giant needs a supercritical lam > 1")
        return attrs


class ExperimentConfigSerializer(serializers.Serializer):
    graph = GraphSpecSerializer()
    alpha = serializers.FloatField()
    seed = serializers.IntegerField(required=False, allow_null=True, default=None)
    horizon = serializers.FloatField(default=1.0)
    M = serializers.IntegerField(default=5, validators=[MinValueValidator(1)])
    ell = serializers.IntegerField(validators=[MinValueValidator(1)])
    L = serializers.IntegerField(default=8, validators=[MinValueValidator(1)])
    replicas = serializers.IntegerField(default=100, validators=[MinValueValidator(1)])
    cycles = serializers.IntegerField(default=50, validators=[MinValueValidator(1)])
    n_hit = serializers.IntegerField(default=3, validators=[MinValueValidator(1)])
    significance = serializers.FloatField(required=False)
    start_mode = serializers.ChoiceField(choices=START_MODES, default="rank")
    start_rank = serializers.IntegerField(default=1, validators=[MinValueValidator(1)])
    truncation = serializers.IntegerField(required=False, validators=[MinValueValidator(1)])
    max_resamples = serializers.IntegerField(default=100, validators=[MinValueValidator(0)])
    escape_samples = serializers.IntegerField(default=10000, validators=[MinValueValidator(1)])
    tree_depth = serializers.IntegerField(default=8, validators=[MinValueValidator(3)])
    k_paths = serializers.IntegerField(default=20, validators=[MinValueValidator(0)])
    workers = serializers.IntegerField(required=False, validators=[MinValueValidator(1)])
    step_budget = serializers.IntegerField(
        required=False, allow_null=True, default=None, validators=[MinValueValidator(1)]
    )

    def validate_alpha(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("alpha must lie in (0, 1)")
        return value

    def validate_horizon(self, value):
        if not value > 0:
            raise serializers.ValidationError("horizon must be positive")
        return value

    def validate_significance(self, value):
        if not 0 < value <= 0.1:
            raise serializers.ValidationError("significance must lie in (0, 0.1]")
        return value

    def validate(self, attrs):
        if attrs["n_hit"] > attrs["M"]:
            raise serializers.ValidationError("n_hit cannot exceed M")
        if attrs["start_rank"] > attrs["M"]:
            raise serializers.ValidationError("start_rank must be one of the M deep traps")
        attrs.setdefault("significance", setting("TRAPLAB_SIGNIFICANCE"))
        attrs.setdefault("truncation", setting("TRAPLAB_LIMIT_TRUNCATION"))
        attrs.setdefault("workers", setting("TRAPLAB_WORKERS"))
        if attrs["truncation"] < attrs["M"]:
            raise serializers.ValidationError("truncation must be at least M")
        return attrs
