"""Task encoding, the planning knowledge base, and plan search."""

import json

import pytest

from conftest import bfs_plan_length
from homelog.engine import PRELUDE_PREDS, SolveConfig, SolveTimeout, solve
from homelog.planner import (
    BENCH_TASK_NAMES,
    DOMAIN_KB_TEXT,
    PlanOptions,
    TASK_CATALOG,
    Task,
    UnresolvableTask,
    domain_kb,
    encode_goal_fluents,
    encode_task,
    execute_plan,
    goal_satisfied,
    plan,
)
from homelog.program import PredId
from homelog.relevance import BUILTIN_PREDS
from homelog.scenes import minimal_scene
from homelog.terms import Const, Struct, Var, format_term, make_list, variant_key
from homelog.world import (
    IllegalAction,
    fluent_list,
    grab,
    load_scene,
    random_scene,
    sit,
    state_to_facts,
    walk,
)


def clause_shape(clause):
    """A clause as one term, for comparison modulo variable renaming."""
    body = [
        Struct("not", (lit.atom,)) if lit.negated else lit.atom for lit in clause.body
    ]
    return variant_key(Struct(":-", (clause.head, make_list(body))))


def squeeze(text):
    return "".join(text.split())


# -- the knowledge base -------------------------------------------------------------


def test_kb_text_contains_the_subset_base_case():
    assert squeeze("transform(State1,FinalState,_,[]) :- subset(FinalState,State1).") in squeeze(
        DOMAIN_KB_TEXT
    )


def test_kb_parses_and_contains_the_base_case_structurally():
    from homelog.parser import parse_program

    expected = parse_program("transform(State1, FinalState, _, []) :- subset(FinalState, State1).")
    shapes = {clause_shape(c) for c in domain_kb()}
    assert clause_shape(expected.clauses[0]) in shapes


def test_kb_defines_the_expected_predicates():
    kb = domain_kb()
    for name, arity in [
        ("initial_state", 1), ("transform", 2), ("transform", 4),
        ("choose_action", 3), ("suggest", 2), ("legal_action", 2),
        ("update", 3), ("update_walking", 5), ("remove_fluent", 3),
        ("complete_task", 2), ("sitting", 1), ("hands_full", 1), ("device", 1),
    ]:
        assert kb.defines(PredId(name, arity)), f"{name}/{arity}"


def test_kb_has_legality_and_effect_rules_for_every_action():
    kb = domain_kb()
    legality = set()
    effects = set()
    for clause in kb:
        arg = clause.head.args[0] if clause.head.args else None
        key = arg.functor if isinstance(arg, Struct) else getattr(arg, "value", None)
        if clause.head_pred == PredId("legal_action", 2):
            legality.add(key)
        elif clause.head_pred == PredId("update", 3):
            effects.add(key)
    expected = {"walk", "grab", "switchon", "switchoff", "sit", "standup"}
    assert legality == expected
    assert effects == expected


def test_kb_suggests_walking_for_every_closeness_prerequisite():
    kb = domain_kb()
    triggers = set()
    for clause in kb:
        if clause.head_pred != PredId("suggest", 2):
            continue
        action = clause.head.args[0]
        assert isinstance(action, Struct) and action.functor == "walk"
        first = clause.body[0].atom
        assert first.functor == "member"
        triggers.add(first.args[0].functor)
    assert triggers == {"close", "holds", "on", "sitting_on"}


def test_kb_body_predicates_are_all_resolvable(six_scene):
    """Every predicate the KB calls is defined somewhere: in the KB, in the
    scene facts, or by the solver itself."""
    kb = domain_kb()
    facts = state_to_facts(six_scene)
    known = set(kb.index) | set(facts.index) | set(PRELUDE_PREDS) | set(BUILTIN_PREDS)
    for clause in kb:
        for lit in clause.body:
            assert lit.pred in known, f"{lit.pred} in clause for {clause.head_pred}"


# -- task encoding -------------------------------------------------------------------


def test_catalog_names():
    assert set(BENCH_TASK_NAMES) <= set(TASK_CATALOG)
    assert TASK_CATALOG["grab_remote"].goal_template == (("holds", "remotecontrol"),)


def test_encode_walk_to_remote_on_minimal_scene():
    lit = encode_task(TASK_CATALOG["walk_to_remote"], minimal_scene())
    assert format_term(lit.atom) == "transform([close(remotecontrol1)], P)"
    assert lit.atom.args[1] == Var("P")


def test_encode_sorts_goal_fluents(six_scene):
    goals = encode_goal_fluents(TASK_CATALOG["grab_cellphone_and_sit_on_couch"], six_scene)
    assert [format_term(g) for g in goals] == ["holds(cellphone1)", "sitting_on(couch1)"]


def test_encode_resolves_each_type_to_the_smallest_id():
    text = json.dumps({
        "rooms": [{"id": "livingroom100", "type": "livingroom"}],
        "objects": [
            {"id": "remotecontrol2", "type": "remotecontrol", "room": "livingroom100"},
            {"id": "remotecontrol1", "type": "remotecontrol", "room": "livingroom100"},
            {"id": "shirt2", "type": "shirt", "room": "livingroom100"},
        ],
        "agent": {"room": "livingroom100"},
    })
    scene = load_scene(text)
    goals = encode_goal_fluents(TASK_CATALOG["grab_remote_and_shirt"], scene)
    assert [format_term(g) for g in goals] == ["holds(remotecontrol1)", "holds(shirt2)"]


def test_encode_unresolvable_task_names_the_type():
    with pytest.raises(UnresolvableTask) as e:
        encode_task(TASK_CATALOG["sit_on_couch"], minimal_scene())
    assert e.value.type_name == "couch"


# -- goal satisfaction and plan execution ----------------------------------------------


def test_goal_satisfied_flips_after_walking():
    s = minimal_scene()
    task = TASK_CATALOG["walk_to_remote"]
    assert not goal_satisfied(s, task)
    s = execute_plan(s, [walk("remotecontrol1")])
    assert goal_satisfied(s, task)


def test_execute_plan_empty_is_identity(six_scene):
    assert execute_plan(six_scene, []) is six_scene


def test_execute_plan_reports_failing_index(six_scene):
    with pytest.raises(IllegalAction) as e:
        execute_plan(six_scene, [grab("remotecontrol1")])
    assert e.value.index == 0
    assert "not close" in str(e.value)
    with pytest.raises(IllegalAction) as e:
        execute_plan(six_scene, [walk("couch1"), sit("couch1"), sit("couch1")])
    assert e.value.index == 2


# -- planning ---------------------------------------------------------------------------


def test_plan_minimal_walk():
    assert plan(minimal_scene(), TASK_CATALOG["walk_to_remote"]) == [walk("remotecontrol1")]


def test_plan_minimal_grab():
    assert plan(minimal_scene(), TASK_CATALOG["grab_remote"]) == [
        walk("remotecontrol1"),
        grab("remotecontrol1"),
    ]


def test_plan_already_satisfied_is_empty(six_scene):
    s = execute_plan(six_scene, [walk("remotecontrol1")])
    assert plan(s, TASK_CATALOG["walk_to_remote"]) == []


def test_plan_respects_max_plan_len(six_scene):
    options = PlanOptions(max_plan_len=1)
    assert plan(six_scene, TASK_CATALOG["grab_remote"], options) is None


def test_plan_unresolvable_task_raises():
    with pytest.raises(UnresolvableTask):
        plan(minimal_scene(), TASK_CATALOG["sit_on_couch"])


def test_plan_frozen_sequences(six_scene):
    got = plan(six_scene, TASK_CATALOG["grab_cellphone_and_sit_on_couch"])
    assert got == [walk("cellphone1"), grab("cellphone1"), walk("couch1"), sit("couch1")]
    got = plan(six_scene, TASK_CATALOG["sit_on_couch"])
    assert got == [walk("couch1"), sit("couch1")]


@pytest.mark.parametrize("task_name", sorted(TASK_CATALOG))
def test_plans_on_the_six_object_scene_are_valid_and_shortest(six_scene, task_name):
    task = TASK_CATALOG[task_name]
    actions = plan(six_scene, task)
    assert actions is not None
    end = execute_plan(six_scene, actions)
    assert goal_satisfied(end, task)
    assert len(actions) == bfs_plan_length(six_scene, task)


@pytest.mark.parametrize("task_name", sorted(TASK_CATALOG))
def test_prune_transparency(six_scene, task_name):
    task = TASK_CATALOG[task_name]
    with_prune = plan(six_scene, task, PlanOptions(prune=True))
    without = plan(six_scene, task, PlanOptions(prune=False))
    assert with_prune == without


@pytest.mark.parametrize("task_name", sorted(TASK_CATALOG))
def test_plans_never_revisit_a_fluent_state(six_scene, task_name):
    task = TASK_CATALOG[task_name]
    actions = plan(six_scene, task)
    state = six_scene
    seen = {tuple(map(format_term, fluent_list(state)))}
    for action in actions:
        state = execute_plan(state, [action])
        key = tuple(map(format_term, fluent_list(state)))
        assert key not in seen
        seen.add(key)


@pytest.mark.parametrize("seed", range(4))
def test_plan_lengths_match_breadth_first_search_on_small_scenes(seed):
    scene = random_scene(seed, 8)
    for task_name in BENCH_TASK_NAMES:
        task = TASK_CATALOG[task_name]
        actions = plan(scene, task)
        want = bfs_plan_length(scene, task)
        if actions is None:
            assert want is None
        else:
            assert len(actions) == want
            assert goal_satisfied(execute_plan(scene, actions), task)


def test_plan_timeout_propagates():
    scene = random_scene(7, 100)
    options = PlanOptions(config=SolveConfig(wall_timeout=0.0005))
    with pytest.raises(SolveTimeout):
        plan(scene, TASK_CATALOG["grab_remote_and_shirt"], options)


def test_complete_task_rules_drive_the_same_search():
    from homelog.parser import parse_query

    program = domain_kb() + state_to_facts(minimal_scene())
    answer = next(solve(program, parse_query("?- complete_task(walk_to_remote, P).")))
    assert format_term(answer.bindings["P"]) == "[walk(remotecontrol1)]"


def test_plan_options_validate():
    with pytest.raises(ValueError):
        PlanOptions(max_plan_len=0)
    assert PlanOptions().prune is True
    assert PlanOptions().max_plan_len == 8


def test_task_is_a_value_object():
    t = Task("demo", (("close", "tv"),))
    assert t.name == "demo"
    assert t.goal_template == (("close", "tv"),)
