from rest_framework import serializers

from instances.documents import (
    CONSTRAINT_KINDS,
    PREDICATE,
    ConstraintDoc,
    InstanceDoc,
    format_atom,
    parse_atom,
)


class ConstraintSerializer(serializers.Serializer):
    scope = serializers.ListField(child=serializers.CharField(), min_length=2, max_length=2)
    kind = serializers.ChoiceField(choices=CONSTRAINT_KINDS)
    tuples = serializers.ListField(
        child=serializers.ListField(child=serializers.IntegerField(), min_length=2, max_length=2),
        required=False,
        default=list,
    )
    atoms = serializers.ListField(child=serializers.CharField(), required=False, default=list)

    def validate_atoms(self, value):
        try:
            return [parse_atom(token) for token in value]
        except ValueError as exc:
            raise serializers.ValidationError(str(exc))

    def validate(self, data):
        if data["kind"] == PREDICATE:
            if not data["atoms"]:
                raise serializers.ValidationError(
                    {"non_field_errors": ["A predicate constraint needs at least one atom."]}
                )
            if data["tuples"]:
                raise serializers.ValidationError(
                    {"non_field_errors": ["A predicate constraint cannot list tuples."]}
                )
        elif data["atoms"]:
            raise serializers.ValidationError(
                {"non_field_errors": ["An extensional constraint cannot list atoms."]}
            )
        return data


class InstanceDocSerializer(serializers.Serializer):
    name = serializers.CharField(required=False, allow_blank=True, default="")
    meta = serializers.DictField(child=serializers.CharField(allow_blank=True), required=False, default=dict)
    variables = serializers.DictField(
        child=serializers.ListField(child=serializers.IntegerField(), allow_empty=False)
    )
    constraints = ConstraintSerializer(many=True, required=False, default=list)

    def validate(self, data):
        variables = data["variables"]
        seen = set()
        for index, constraint in enumerate(data["constraints"]):
            x, y = constraint["scope"]
            for var in (x, y):
                if var not in variables:
                    raise serializers.ValidationError(
                        {"non_field_errors": [f"Constraint {index} references unknown variable {var!r}."]}
                    )
            if x == y:
                raise serializers.ValidationError(
                    {"non_field_errors": [f"Constraint {index} is on a single variable."]}
                )
            pair = frozenset((x, y))
            if pair in seen:
                raise serializers.ValidationError(
                    {"non_field_errors": [f"Constraint {index} repeats the pair ({x}, {y})."]}
                )
            seen.add(pair)
        return data

    def save(self):
        data = self.validated_data
        constraints = [
            ConstraintDoc(tuple(c["scope"]), c["kind"], tuples=c["tuples"], atoms=c["atoms"])
            for c in data["constraints"]
        ]
        return InstanceDoc(
            name=data["name"],
            variables=data["variables"],
            constraints=constraints,
            meta=data["meta"],
        ).validate()


def document_to_data(doc: InstanceDoc) -> dict:
    """Plain structure accepted back by ``InstanceDocSerializer``."""
    constraints = []
    for constraint in doc.constraints:
        item = {"scope": list(constraint.scope), "kind": constraint.kind}
        if constraint.kind == PREDICATE:
            item["atoms"] = [format_atom(atom) for atom in constraint.atoms]
        else:
            item["tuples"] = [list(pair) for pair in constraint.tuples]
        constraints.append(item)
    return {
        "name": doc.name,
        "meta": dict(doc.meta),
        "variables": {name: list(values) for name, values in doc.variables.items()},
        "constraints": constraints,
    }
