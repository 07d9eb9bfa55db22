import random

import pytest

from matsel import (
    Condition,
    DecisionRule,
    DesignRequirement,
    Interval,
    Knowledgebase,
    MaterialClass,
    RequirementError,
    RulesLoadError,
    UnclassifiableError,
    classify,
)
from matsel.knowledgebase import parse_rules


class TestParseRules:
    def test_default_file_loads_23_rules_covering_all_classes(self, kb):
        assert len(kb) == 23
        for material_class in MaterialClass:
            assert kb.rules_for(material_class)

    def test_unknown_property(self, schema):
        with pytest.raises(RulesLoadError, match="unknown property 'Flavor'"):
            parse_rules("rule 1 => Polymer when Flavor < 3\n", schema)

    def test_duplicate_rule_id(self, schema):
        text = (
            "rule 7 => Polymer when Hardness < 100\n"
            "rule 7 => Metal when Hardness > 100\n"
            "rule 8 => Ceramic when Hardness > 800\n"
        )
        with pytest.raises(RulesLoadError, match="duplicate rule id 7"):
            parse_rules(text, schema)

    def test_malformed_comparator(self, schema):
        with pytest.raises(RulesLoadError, match="line 1"):
            parse_rules("rule 1 => Polymer when Hardness != 3\n", schema)

    def test_class_with_zero_rules(self, schema):
        text = "rule 1 => Polymer when Hardness < 100\nrule 2 => Metal when Hardness > 100\n"
        with pytest.raises(RulesLoadError, match="Ceramic has zero rules"):
            parse_rules(text, schema)

    def test_between_bounds_must_be_ordered(self, schema):
        with pytest.raises(RulesLoadError, match="out of order"):
            parse_rules("rule 1 => Polymer when Hardness between 9 1\n", schema)

    def test_unknown_class(self, schema):
        with pytest.raises(RulesLoadError, match="unknown material class"):
            parse_rules("rule 1 => Plastic when Hardness < 100\n", schema)

    def test_comments_and_blank_lines_skipped(self, schema):
        text = """
        # polymer side
        rule 1 => Polymer when Hardness < 100

        rule 2 => Ceramic when Hardness > 800   # hard stuff
        rule 3 => Metal when Hardness between 100 700
        """
        kb = parse_rules(text, schema)
        assert [r.rule_id for r in kb.rules] == [1, 2, 3]

    def test_conjunction_parses(self, schema):
        kb = parse_rules(
            "rule 1 => Polymer when Hardness < 100 and Tensile Modulus < 10000\n"
            "rule 2 => Ceramic when Hardness > 800\n"
            "rule 3 => Metal when Hardness between 100 700\n",
            schema,
        )
        assert len(kb.rules[0].conditions) == 2
        assert kb.rules[0].property_names == {"Hardness", "Tensile Modulus"}


class TestConditions:
    @pytest.mark.parametrize(
        "cmp,threshold,value,expected",
        [
            ("<", 5.0, 4.9, True),
            ("<", 5.0, 5.0, False),
            ("<=", 5.0, 5.0, True),
            (">", 5.0, 5.1, True),
            (">=", 5.0, 5.0, True),
            ("between", (1.0, 3.0), 1.0, True),
            ("between", (1.0, 3.0), 3.0, True),
            ("between", (1.0, 3.0), 3.1, False),
        ],
    )
    def test_evaluate(self, cmp, threshold, value, expected):
        assert Condition("Hardness", cmp, threshold).evaluate(value) is expected


class TestClassify:
    def test_reference_requirement_is_polymer(self, reference_requirement, kb, schema):
        result = classify(reference_requirement, kb, schema)
        assert result.material_class is MaterialClass.POLYMER

    def test_index_pattern_sorted_and_duplicate_free(self, reference_requirement, kb, schema):
        pattern = classify(reference_requirement, kb, schema).index_pattern
        assert list(pattern) == sorted(set(pattern))
        assert pattern  # non-empty

    def test_node_list_follows_requirement_order(self, kb, schema):
        req = DesignRequirement((("Hardness", 56.67), ("Tensile Strength", 20.0)))
        result = classify(req, kb, schema)
        assert result.node_list == (("Hardness", 3), ("Tensile Strength", 0))

    def test_deterministic(self, reference_requirement, kb, schema):
        first = classify(reference_requirement, kb, schema)
        assert all(classify(reference_requirement, kb, schema) == first for _ in range(20))

    def test_rules_with_absent_properties_are_skipped(self, kb, schema):
        # Only rule 8 (Polymer) and rule 19 (Metal) mention Thermal
        # Conductivity alone; 0.5 satisfies just the Polymer one.
        req = DesignRequirement((("Thermal Conductivity", 0.5),))
        result = classify(req, kb, schema)
        assert result.material_class is MaterialClass.POLYMER
        assert result.index_pattern == (8,)

    def test_interval_and_ordinal_values_scalarize_before_rules(self, kb, schema):
        req = DesignRequirement((("Density", Interval(0.9, 1.1)),))  # midpoint 1.0
        result = classify(req, kb, schema)
        assert result.material_class is MaterialClass.POLYMER
        assert 4 in result.index_pattern

    def test_unclassifiable_lists_nearest_misses(self, kb, schema):
        req = DesignRequirement((("Hardness", 750.0),))  # between all thresholds
        with pytest.raises(UnclassifiableError) as exc_info:
            classify(req, kb, schema)
        assert exc_info.value.nearest_misses
        assert "nearest misses" in str(exc_info.value)

    def test_empty_requirement_rejected_at_construction(self):
        with pytest.raises(RequirementError):
            DesignRequirement(())

    def test_tie_breaks_to_canonical_class_order(self, schema):
        kb = Knowledgebase(
            (
                DecisionRule(1, MaterialClass.METAL, (Condition("Hardness", ">", 10.0),)),
                DecisionRule(2, MaterialClass.POLYMER, (Condition("Hardness", ">", 10.0),)),
                DecisionRule(3, MaterialClass.CERAMIC, (Condition("Hardness", ">", 1e12),)),
            )
        )
        req = DesignRequirement((("Hardness", 50.0),))
        result = classify(req, kb, schema)
        assert result.class_scores[MaterialClass.POLYMER] == 1
        assert result.class_scores[MaterialClass.METAL] == 1
        assert result.material_class is MaterialClass.POLYMER

    def test_ceramic_metal_tie_breaks_to_ceramic(self, schema):
        kb = Knowledgebase(
            (
                DecisionRule(1, MaterialClass.METAL, (Condition("Hardness", ">", 10.0),)),
                DecisionRule(2, MaterialClass.CERAMIC, (Condition("Hardness", ">", 10.0),)),
                DecisionRule(3, MaterialClass.POLYMER, (Condition("Hardness", ">", 1e12),)),
            )
        )
        result = classify(DesignRequirement((("Hardness", 50.0),)), kb, schema)
        assert result.material_class is MaterialClass.CERAMIC

    def test_inert_rule_never_changes_classification(self, kb, schema):
        inert = DecisionRule(999, MaterialClass.METAL, (Condition("Hardness", ">", 1e15),))
        extended = Knowledgebase(kb.rules + (inert,))
        rng = random.Random(7)
        for _ in range(25):
            req = DesignRequirement(
                (
                    ("Tensile Strength", rng.uniform(1, 2500)),
                    ("Hardness", rng.uniform(1, 2500)),
                    ("Tensile Modulus", rng.uniform(100, 400000)),
                )
            )
            try:
                base = classify(req, kb, schema)
            except UnclassifiableError:
                with pytest.raises(UnclassifiableError):
                    classify(req, extended, schema)
                continue
            augmented = classify(req, extended, schema)
            assert augmented.material_class is base.material_class
            assert augmented.index_pattern == base.index_pattern

    def test_node_list_length_equals_requirement_length(self, reference_requirement, kb, schema):
        result = classify(reference_requirement, kb, schema)
        assert len(result.node_list) == len(reference_requirement.entries)


def test_reference_requirement_fires_expected_default_rules(reference_requirement, kb, schema):
    # The five low mechanical values satisfy exactly the five Polymer
    # rules that mention only those properties.
    result = classify(reference_requirement, kb, schema)
    assert result.index_pattern == (1, 2, 3, 6, 7)
    assert result.class_scores == {
        MaterialClass.POLYMER: 5,
        MaterialClass.CERAMIC: 0,
        MaterialClass.METAL: 0,
    }
