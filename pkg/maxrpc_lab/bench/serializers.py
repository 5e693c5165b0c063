from rest_framework import serializers

from csp.heuristics import HEURISTICS, ORDERINGS
from csp.search import BRANCHINGS, MODES, VAR_HEURISTICS
from instances.exceptions import InstanceFormatError
from instances.loaders import GENERATOR_PREFIX, parse_generator_spec
from bench.manifest import BENCH_MODES, PREPROCESS, AlgorithmEntry, BenchManifest
from bench.reports import REPORT_FORMATS


OVERRIDES = (
    "queue_heuristic",
    "case1_ordering",
    "case2_ordering",
    "case3_ordering",
    "case4_ordering",
    "use_last_ac_shortcuts",
    "use_bidirectionality",
)


class AlgorithmSerializer(serializers.Serializer):
    id = serializers.CharField()
    light = serializers.BooleanField(required=False, default=False)
    queue_heuristic = serializers.ChoiceField(choices=HEURISTICS, required=False, allow_null=True)
    case1_ordering = serializers.ChoiceField(choices=ORDERINGS, required=False, allow_null=True)
    case2_ordering = serializers.ChoiceField(choices=ORDERINGS, required=False, allow_null=True)
    case3_ordering = serializers.ChoiceField(choices=ORDERINGS, required=False, allow_null=True)
    case4_ordering = serializers.ChoiceField(choices=ORDERINGS, required=False, allow_null=True)
    use_last_ac_shortcuts = serializers.BooleanField(required=False, allow_null=True)
    use_bidirectionality = serializers.BooleanField(required=False, allow_null=True)

    def to_internal_value(self, data):
        # a bare id is shorthand for {"id": ...}
        if isinstance(data, str):
            data = {"id": data}
        return super().to_internal_value(data)

    def validate(self, data):
        overrides = {key: data[key] for key in OVERRIDES if data.get(key) is not None}
        try:
            data["entry"] = AlgorithmEntry.build(data["id"], light=data["light"], **overrides)
        except ValueError as exc:
            raise serializers.ValidationError({"non_field_errors": [str(exc)]})
        return data


class BenchManifestSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, allow_blank=True, default="")
    mode = serializers.ChoiceField(choices=BENCH_MODES, required=False, default=PREPROCESS)
    sources = serializers.ListField(child=serializers.CharField(), allow_empty=False)
    algorithms = AlgorithmSerializer(many=True, allow_empty=False)
    branching = serializers.ChoiceField(choices=BRANCHINGS, required=False, allow_null=True, default=None)
    var_heuristic = serializers.ChoiceField(choices=VAR_HEURISTICS, required=False, allow_null=True, default=None)
    search_mode = serializers.ChoiceField(choices=MODES, required=False, allow_null=True, default=None)
    node_limit = serializers.IntegerField(min_value=1, required=False, allow_null=True, default=None)
    time_limit = serializers.FloatField(required=False, allow_null=True, default=None)
    repetitions = serializers.IntegerField(min_value=1, required=False, default=1)
    seed = serializers.IntegerField(required=False, allow_null=True, default=None)
    oracle_check = serializers.BooleanField(required=False, default=False)
    format = serializers.ChoiceField(choices=REPORT_FORMATS, required=False, default="csv")
    out = serializers.CharField(required=False, allow_null=True, allow_blank=True, default=None)

    def validate_sources(self, value):
        for source in value:
            if source.startswith(GENERATOR_PREFIX):
                try:
                    parse_generator_spec(source)
                except InstanceFormatError as exc:
                    raise serializers.ValidationError(str(exc))
        return value

    def validate_time_limit(self, value):
        if value is not None and value <= 0:
            raise serializers.ValidationError("time_limit must be positive.")
        return value

    def validate(self, data):
        labels = [entry["entry"].label for entry in data["algorithms"]]
        duplicates = sorted({label for label in labels if labels.count(label) > 1})
        if duplicates:
            raise serializers.ValidationError(
                {"non_field_errors": [f"Algorithms listed twice: {', '.join(duplicates)}."]}
            )
        return data

    def save(self):
        data = self.validated_data
        return BenchManifest(
            name=data["name"],
            mode=data["mode"],
            sources=list(data["sources"]),
            algorithms=[entry["entry"] for entry in data["algorithms"]],
            branching=data["branching"],
            var_heuristic=data["var_heuristic"],
            search_mode=data["search_mode"],
            node_limit=data["node_limit"],
            time_limit=data["time_limit"],
            repetitions=data["repetitions"],
            seed=data["seed"],
            oracle_check=data["oracle_check"],
            output_format=data["format"],
            output_path=data["out"] or None,
        )
