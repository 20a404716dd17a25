#!/usr/bin/env python3
"""Builds the sample datasets, demonstration payloads and stub script.

The records follow the source datasets' published field layouts (see
docs/dataset-formats.md). The scripted stub answers every prompt the harness
can assemble for them, with a deterministic mix of wrong answers and probe
errors so metric code paths see non-trivial inputs.
"""

import json
import os

ROOT = os.path.join(os.path.dirname(__file__), "..")

ANIMALS = ["amberjack", "baboon", "caterpillar", "dolphin", "eagle", "ferret",
           "gecko", "halibut", "iguana", "jackal", "koala", "lobster"]
ITEMS = ["a knife", "a trumpet", "a banana", "a map", "a candle", "a drum"]
ACTIONS = ["removes one piece from", "steals the ball of", "burns the warehouse of",
           "attacks the field of"]
BENEFITS = ["carer support", "winter heating", "housing relief", "child travel", "school meal"]
CITIES = ["Bristol", "Leeds", "Cardiff", "Norwich", "Derby", "Swansea"]
PROGRAMS = ["travel permit", "market stall licence", "fishing permit", "housing grant",
            "noise permit", "parking badge"]

STUB_RULES = []


def rule(contains, response, system_contains=None):
    entry = {"contains": contains, "response": response}
    if system_contains:
        entry["system_contains"] = system_contains
    STUB_RULES.append(entry)


def snake(text):
    return "".join(c if c.isalnum() else "_" for c in text.lower())


def write(relpath, content):
    path = os.path.join(ROOT, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(content)


def write_jsonl(relpath, records):
    write(relpath, "".join(json.dumps(r, ensure_ascii=False) + "\n" for r in records))


# ---------------------------------------------------------------------------
# CondQA
# ---------------------------------------------------------------------------

def condqa_instance(i, split):
    ref = f"CQ-{split[0].upper()}{i:03d}"
    benefit = BENEFITS[i % len(BENEFITS)]
    city = CITIES[i % len(CITIES)]
    days = 5 + (i % 6) * 5
    cls = i % 3  # 0 span, 1 yes, 2 no
    children = 1 if cls == 2 else 2 + (i % 3)
    scenario = (f"I have been living in {city} for 4 years and I care for {children} "
                f"children. My case reference is {ref}.")
    if cls == 0:
        question = f"How long will it take for the decision on case {ref} to arrive?"
        answers = [[f"within {days} days", []]]
    else:
        question = f"Am I eligible for the {benefit} payment?"
        answers = [["yes" if cls == 1 else "no", []]]
    qualify = (f"<p>You may qualify for the {benefit} payment if you care for at least 2 "
               f"children.</p>")
    decision = f"<p>Decisions on case {ref} arrive within {days} days of the application.</p>"
    contents = [
        f"<h1>{benefit.capitalize()} payment</h1>",
        qualify,
        "<li>you must live in the United Kingdom</li>",
        decision,
        "<h1>Other provisions</h1>",
        f"<p>Provision {i:03d} covers unrelated matters and does not affect this claim.</p>",
    ]
    return {
        "id": f"condqa-{split}-{i:03d}",
        "url": f"https://example.gov/benefits/{snake(benefit)}",
        "scenario": scenario,
        "question": question,
        "answers": answers,
        "evidences": [qualify, decision],
        "contents": contents,
    }, {"ref": ref, "benefit": benefit, "city": city, "days": days, "cls": cls,
        "children": children}


def condqa_code(rec, meta):
    qvar = ("decision_arrival_time" if meta["cls"] == 0
            else f"eligible_for_{snake(meta['benefit'])}")
    ref_var = meta["ref"].replace("-", "_")
    doc = rec["contents"][:4]  # oracle keeps the first heading span only
    lines = [
        f"# Question: {rec['scenario']} {rec['question']}",
        "",
        f"living_in_{snake(meta['city'])} = True",
        "",
        "years_living_4 = True",
        "",
        f"care_for_{meta['children']}_children = True",
        "",
        f"case_reference_{ref_var} = True",
        "",
        f"{qvar} = None # This is the variable that answers the question",
        "",
        f"# {doc[0]}",
        "",
        f"# {doc[1]}",
        "",
        "if care_for_at_least_2_children:",
        "",
        f"    eligible_{snake(meta['benefit'])} = True",
        "",
        f"# {doc[2]}",
        "",
        "live_in_united_kingdom = True",
        "",
        f"# {doc[3]}",
        "",
        f"decision_time_{ref_var} = \"within {meta['days']} days\"",
    ]
    return "\n".join(lines), qvar


def condqa_answer(meta, correct):
    if meta["cls"] == 0:
        value = f"within {meta['days']} days" if correct else "within a few days"
        cot = (f"The document states that decisions on case {meta['ref']} arrive within "
               f"{meta['days']} days of the application.\n"
               f"The case reference matches {meta['ref']}.")
        return f"{cot}\nAnswer: {value}"
    gold = "yes" if meta["cls"] == 1 else "no"
    value = gold if correct else ("no" if gold == "yes" else "yes")
    cot = (f"The {meta['benefit']} payment requires caring for at least 2 children.\n"
           f"The scenario states {meta['children']} children are cared for.")
    return f"{cot}\nAnswer: {value}"


def gen_condqa(split, n):
    records, metas = [], []
    for i in range(n):
        rec, meta = condqa_instance(i, split)
        records.append(rec)
        metas.append(meta)
    write_jsonl(f"fixtures/datasets/condqa_{split}.jsonl", records)
    return records, metas


def condqa_rules(records, metas):
    for rec, meta in zip(records, metas):
        i = int(rec["id"].rsplit("-", 1)[1])
        code, qvar = condqa_code(rec, meta)
        text_ok = i % 5 != 2
        code_ok = i % 7 != 3
        # Most specific first: the code-framed answer prompt, then the plain
        # text prompt, then the translation request.
        rule([meta["ref"], "# Let's think step by step:"],
             condqa_answer(meta, code_ok).replace("Answer:", "#Answer:"))
        rule([meta["ref"], "Let's think step by step:"], condqa_answer(meta, text_ok))
        rule([f"My case reference is {meta['ref']}"],
             f"I live in {meta['city']}.\nI care for {meta['children']} children.\n"
             f"My case reference is {meta['ref']}.",
             system_contains="atomic statements")
        rule([f"Decisions on case {meta['ref']}"],
             f"Decisions arrive within {meta['days']} days. The case is {meta['ref']}.",
             system_contains="atomic statements")
        rule([meta["ref"]], code)
        # Probe replies: the case-reference fact/variable is wrong for every
        # fourth instance, everything else is answered correctly.
        probe_err = i % 4 == 1
        rule([f"is it true that My case reference is {meta['ref']}"],
             "False" if probe_err else "True")
        rule([f"value of the variable case_reference_{meta['ref'].replace('-', '_')}"],
             "False" if probe_err else "True")


# Shared-variable probes and generic decomposition fallbacks.
def condqa_generic_rules():
    rule(["You may qualify for the"],
         "The payment has conditions. Care for at least 2 children is required.",
         system_contains="atomic statements")
    rule([], "This is a statement.", system_contains="atomic statements")
    rule(["value of the variable living_in_"], "True")
    rule(["value of the variable years_living_"], "True")
    rule(["value of the variable care_for_"], "True")
    rule(["value of the variable live_in_united_kingdom"], "True")
    rule(["value of the variable decision_time_"], "True")
    rule(["is it true that I live in"], "True")
    rule(["is it true that I care for"], "True")


# ---------------------------------------------------------------------------
# BGQA
# ---------------------------------------------------------------------------

def bgqa_instance(h, i, split):
    game = f"G{h}-{split[0].upper()}{i:03d}"
    a = ANIMALS[i % len(ANIMALS)]
    t = ANIMALS[(i + 5) % len(ANIMALS)]
    item = ITEMS[i % len(ITEMS)]
    action = ACTIONS[i % len(ACTIONS)]
    cls = i % 3  # 0 proved, 1 disproved, 2 unknown
    label = ["proved", "disproved", "unknown"][cls]

    fact_item = ITEMS[(i + 3) % len(ITEMS)] if cls == 2 else item
    fact = f"The {a} in game {game} has {fact_item}"

    rules_nl = []
    middles = [f"the {a} is wary of the {t}", f"the {a} is close to the {t}"]
    antecedent = f"the {a} has {item}"
    for k in range(1, h + 1):
        consequent = middles[k - 1] if k < h else f"the {a} {action} the {t}"
        if k == h and cls == 1:
            consequent = f"the {a} does not {action.replace('s ', ' ', 1)} the {t}"
        rules_nl.append(f"Rule{k}: If {antecedent}, then {consequent}")
        antecedent = middles[k - 1] if k < h else antecedent

    question = f"does the {a} {action.replace('s ', ' ', 1)} the {t}?"
    example = ("A few players are playing boardgame " + game + "\n\n"
               "The current state of the game is as follows\n\n" + fact + "\n\n"
               "And the rules of the game are as follows\n\n" + "\n\n".join(rules_nl) + "\n\n"
               "Based on the game state and the rules and preferences, " + question)

    if cls == 2:
        proof = ("The given fact does not satisfy Rule1.\n"
                 "No rule concludes the question.\n"
                 "So the answer is unknown.")
    else:
        steps = [f"By the game state, the {a} has {fact_item}."]
        for k in range(1, h + 1):
            steps.append(f"Rule{k} applies.")
        steps.append(f"So the answer is {'yes' if cls == 0 else 'no'}.")
        proof = "\n".join(steps)

    return {
        "id": f"bgqa{h}-{split}-{i:03d}",
        "example": example,
        "proof": proof,
        "label": label,
        "facts": [fact],
        "rules": rules_nl,
    }, {"game": game, "a": a, "t": t, "item": item, "fact_item": fact_item,
        "action": action, "cls": cls, "fact": fact, "rules_nl": rules_nl, "h": h}


def bgqa_code(rec, meta):
    h, a, t = meta["h"], meta["a"], meta["t"]
    action_pred = snake(meta["action"].split()[0])  # removes -> removes
    mid_preds = [f"wary_of({a}, {t})", f"close_to({a}, {t})"]
    final_pred = f"{action_pred}({a}, {t})"
    lines = [f"# A few players are playing boardgame {meta['game']}", "",
             "# The rules of the game are as follows", ""]
    antecedent = f"has_{snake(meta['item'])}({a})"
    for k in range(1, h + 1):
        consequent = mid_preds[k - 1] if k < h else final_pred
        if k == h and meta["cls"] == 1:
            consequent = "not " + consequent
        lines += [f"# {meta['rules_nl'][k - 1]}", "",
                  f"rule{k}() = {antecedent} => {consequent}", ""]
        antecedent = mid_preds[k - 1] if k < h else antecedent
    lines += ["# The current state of the game is as follows", "",
              f"# {meta['fact']}", "",
              f"has_{snake(meta['fact_item'])}({a}) = True", "",
              f"# Based on the game state and the rules and preferences, does the {a} "
              f"{meta['action'].replace('s ', ' ', 1)} the {t}?", "",
              f"question = {final_pred}"]
    return "\n".join(lines)


def bgqa_answer(meta, correct, marker):
    gold = ["yes", "no", "unknown"][meta["cls"]]
    value = gold if correct else {"yes": "no", "no": "unknown", "unknown": "yes"}[gold]
    cot = (f"The game state gives: the {meta['a']} has {meta['fact_item']}.\n"
           f"Checking the rules of game {meta['game']} against the state.")
    tail = f"Answer: {value}" if marker else f"So the answer is {value}."
    return f"{cot}\n{tail}"


def gen_bgqa(h, split, n):
    records, metas = [], []
    for i in range(n):
        rec, meta = bgqa_instance(h, i, split)
        records.append(rec)
        metas.append(meta)
    write_jsonl(f"fixtures/datasets/bgqa{h}_{split}.jsonl", records)
    return records, metas


def bgqa_rules(records, metas):
    for rec, meta in zip(records, metas):
        i = int(rec["id"].rsplit("-", 1)[1])
        text_ok = i % 5 != 2
        code_ok = i % 7 != 3
        # Probe first: the fact carries the game id, so it is unique.
        rule([f"Is it true that {meta['fact']}"], "no" if i % 4 == 1 else "yes")
        rule([meta["game"], "question = "], bgqa_answer(meta, code_ok, marker=True))
        rule([meta["game"]], bgqa_code(rec, meta), system_contains="translates logic puzzles")
        rule([f"in game {meta['game']} has"],
             f"The {meta['a']} has {meta['fact_item']}. "
             f"The {meta['a']} plays in game {meta['game']}.",
             system_contains="atomic statements")
        rule([meta["game"]], bgqa_answer(meta, text_ok, marker=False))


def bgqa_generic_rules():
    # Transformed code prompts (anonymized/random) keep only the comments;
    # answer anything deterministic for them.
    rule(["# Based on the game state"], "The code was inspected step by step.\nAnswer: unknown")


# ---------------------------------------------------------------------------
# ShARC
# ---------------------------------------------------------------------------

def sharc_instance(i, split):
    case = f"SH-{split[0].upper()}{i:03d}"
    program = PROGRAMS[i % len(PROGRAMS)]
    cls = i % 3  # 0 yes, 1 no, 2 not enough information
    snippet = (f"## {program.capitalize()} rules\n\n"
               f"You may apply for the {program} when the following hold:\n\n"
               "* you are at least 18 years old\n\n"
               "* you have a case number")
    question = f"Can I apply for the {program}?"
    scenario = f"My case number is {case}."
    history = [{"follow_up_question": "Are you at least 18 years old?",
                "follow_up_answer": "No" if cls == 1 else "Yes"}]
    if cls != 2:
        history.append({"follow_up_question": "Do you have a case number?",
                        "follow_up_answer": "Yes"})
    answer = ["yes", "no", "not enough information"][cls]
    return {
        "utterance_id": f"sharc-{split}-{i:03d}",
        "snippet": snippet,
        "question": question,
        "scenario": scenario,
        "history": history,
        "answer": answer,
    }, {"case": case, "program": program, "cls": cls}


def sharc_code(rec, meta):
    case_var = meta["case"].replace("-", "_")
    qvar = f"can_apply_{snake(meta['program'])}_{case_var}"
    age = {0: "True", 1: "False", 2: "None"}[meta["cls"]]
    has_case = "True" if meta["cls"] != 2 else "None"
    snippet_lines = rec["snippet"].split("\n\n")
    lines = [
        "# Question:",
        f"# {rec['scenario']} {rec['question']}",
        "",
        f"at_least_18_years_old = {age}",
        "",
        f"has_case_number_{case_var} = {has_case}",
        "",
        f"{qvar} = None # This is the variable that answers the question.",
        "",
        "# Document:",
        "",
        f"{snippet_lines[0]}",
        "",
        f"# {snippet_lines[1]}",
        "",
        f"# {snippet_lines[2]}",
        "",
        "if at_least_18_years_old:",
        "",
        "    application_age_ok = True",
        "",
        f"# {snippet_lines[3]}",
        "",
        f"if has_case_number_{case_var}:",
        "",
        "    case_number_ok = True",
    ]
    return "\n".join(lines), qvar


def gen_sharc(split, n):
    records, metas = [], []
    for i in range(n):
        rec, meta = sharc_instance(i, split)
        records.append(rec)
        metas.append(meta)
    write_jsonl(f"fixtures/datasets/sharc_{split}.jsonl", records)
    return records, metas


def sharc_rules(records, metas):
    for rec, meta in zip(records, metas):
        i = int(rec["utterance_id"].rsplit("-", 1)[1])
        code, qvar = sharc_code(rec, meta)
        gold_value = {0: "True", 1: "False", 2: "None"}[meta["cls"]]
        gold_label = rec["answer"]
        code_ok = i % 7 != 3
        text_ok = i % 5 != 2
        wrong_value = {"True": "False", "False": "None", "None": "True"}[gold_value]
        wrong_label = {"yes": "no", "no": "not enough information",
                       "not enough information": "yes"}[gold_label]
        rule([meta["case"], f"{qvar} = "], gold_value if code_ok else wrong_value)
        rule([meta["case"], "What is the answer to the question:"],
             gold_label if text_ok else wrong_label)
        rule([meta["case"]], code)


# ---------------------------------------------------------------------------
# Demonstrations
# ---------------------------------------------------------------------------

def condqa_translation_source(rec):
    doc = "\n\n".join(rec["contents"][:4])  # oracle-retrieved section
    return f"Question: {rec['scenario']} {rec['question']}\n\nDocument: {doc}"


def sharc_translation_source(rec):
    history = "\n\n".join(f"Q: {h['follow_up_question']}\n\nA: {h['follow_up_answer']}"
                          for h in rec["history"])
    return (f"Question: {rec['scenario']} {rec['question']}\nDocument:\n\n{rec['snippet']}"
            f"\n\nConversation history:\n\n{history}")


def gen_demos(condqa_train, condqa_meta, bgqa_train, sharc_train, sharc_meta):
    demos = []
    for rec, meta in zip(condqa_train[:5], condqa_meta[:5]):
        code, _ = condqa_code(rec, meta)
        demos.append({"id": rec["id"], "source": condqa_translation_source(rec), "code": code})
    write_jsonl("demos/condqa/translation.jsonl", demos)
    for rec, meta in zip(condqa_train, condqa_meta):
        code, _ = condqa_code(rec, meta)
        write(f"demos/condqa/code/{rec['id'].replace('-', '_')}.txt", code + "\n")

    for h, records, metas in bgqa_train:
        demos = []
        for rec, meta in zip(records[:5], metas[:5]):
            demos.append({"id": rec["id"], "source": rec["example"],
                          "code": bgqa_code(rec, meta)})
        write_jsonl(f"demos/bgqa{h}/translation.jsonl", demos)
        for rec, meta in zip(records, metas):
            write(f"demos/bgqa{h}/code/{rec['id'].replace('-', '_')}.txt",
                  bgqa_code(rec, meta) + "\n")

    demos = []
    for rec, meta in zip(sharc_train[:5], sharc_meta[:5]):
        code, _ = sharc_code(rec, meta)
        demos.append({"id": rec["utterance_id"], "source": sharc_translation_source(rec),
                      "code": code})
    write_jsonl("demos/sharc/translation.jsonl", demos)
    for rec, meta in zip(sharc_train, sharc_meta):
        code, _ = sharc_code(rec, meta)
        write(f"demos/sharc/code/{rec['utterance_id'].replace('-', '_')}.txt", code + "\n")

    # Code -> NL demonstrations for the back-translation prompt.
    bt = [
        {"code": "# <p>You can apply to become the estate's administrator if you are 18 or over "
                 "and you are the most 'entitled' inheritor of the deceased's estate.</p>\n"
                 "if applicant_age >= 18 and entitled_inheritor:\n"
                 "    can_apply_estate_administrator = True",
         "text": "# <p>You can apply to become the estate's administrator if you are 18 or over "
                 "and you are the most 'entitled' inheritor of the deceased's estate.</p>\n"
                 "Key entity: applicant age\nKey entity: entitled inheritor\n"
                 "if you are 18 or over and you are the most entitled inheritor, you can apply "
                 "to become the estate's administrator"},
        {"code": "# You must claim within 3 months to get the full amount.\n"
                 "if claim_within_3_months:\n    full_amount = True",
         "text": "# You must claim within 3 months to get the full amount.\n"
                 "Key entity: claim within 3 months\n"
                 "if you claim within 3 months, you get the full amount"},
        {"code": "# Rule2: If something removes a piece of the dog and becomes an enemy of the "
                 "catfish, it does not burn the warehouse of the mosquito.\n"
                 "rule2(something) = remove(something, piece_of(dog)) & enemy(something, catfish) "
                 "=> not burn(something, warehouse_of(mosquito))",
         "text": "Rule2: If something removes from the board one of the pieces of the dog and "
                 "also becomes an enemy of the catfish, then it does not burn the warehouse of "
                 "the mosquito"},
        {"code": "# The decision arrives within 10 days.\ndecision_time = \"within 10 days\"",
         "text": "# The decision arrives within 10 days.\nKey entity: decision time"},
    ]
    write_jsonl("demos/backtranslation.jsonl", bt)

    atomic = [
        {"sentence": "<p>Applying for the legal right to deal with someone's property, money and "
                     "possessions (their estate) when they die is called applying for "
                     "probate.</p>",
         "statements": "Applying for the legal right is a process.\n"
                       "The process is called 'applying for probate'.\n"
                       "The legal right is to deal with someone's property, money, and "
                       "possessions.\nThe someone is a person who has died.\n"
                       "The property, money, and possessions are collectively called the "
                       "'estate'."},
        {"sentence": "The licence costs 12 pounds and is valid for one year.",
         "statements": "The licence costs 12 pounds.\nThe licence is valid for one year."},
        {"sentence": "You must renew the permit before it expires to keep parking in the zone.",
         "statements": "The permit must be renewed before it expires.\n"
                       "Renewing keeps the right to park in the zone."},
    ]
    write_jsonl("demos/atomic.jsonl", atomic)


# ---------------------------------------------------------------------------
# Prices and configs
# ---------------------------------------------------------------------------

def gen_prices():
    write("fixtures/prices.json", json.dumps({
        "models": {
            "stub-model": {"prompt_per_1k": 0.001, "completion_per_1k": 0.002},
            "gpt-3.5-turbo-16k": {"prompt_per_1k": 0.003, "completion_per_1k": 0.004},
            "gpt-3.5-turbo": {"prompt_per_1k": 0.0015, "completion_per_1k": 0.002},
            "mixtral-8x7b-instruct": {"prompt_per_1k": 0.0007, "completion_per_1k": 0.0007},
            "mistral-7b-instruct": {"prompt_per_1k": 0.00025, "completion_per_1k": 0.00025}
        }
    }, indent=2) + "\n")


def dataset_paths(name):
    return {"dev": f"fixtures/datasets/{name}_dev.jsonl",
            "test": f"fixtures/datasets/{name}_dev.jsonl",
            "train": f"fixtures/datasets/{name}_train.jsonl"}


def gen_configs():
    base = {
        "model_id": "stub-model",
        "backend": "stub",
        "stub_script": "fixtures/stub/script.json",
        "replay_dir": "fixtures/replay",
        "cache_dir": ".codeprompt-cache",
        "datasets": {name: dataset_paths(name)
                     for name in ["condqa", "bgqa1", "bgqa2", "bgqa3", "sharc"]},
        "run": {"datasets": ["bgqa1"], "split": "dev", "kinds": ["text", "code"],
                "seeds": [0, 1], "n_per_class": 1, "limit": 0, "threads": 1},
        "templates_dir": "templates/paper-v1",
        "demos_dir": "demos",
        "prices": "fixtures/prices.json",
        "out_dir": "out",
        "probes": {"condqa_max_entities": 5, "condqa_max_steps": 3, "condqa_instances": 30,
                   "bgqa_instances": 50, "bgqa3_instances": 20,
                   "span_correct_threshold": 0.5},
    }
    write("configs/bgqa1_dev.json", json.dumps(base, indent=2) + "\n")

    smoke = dict(base)
    smoke["run"] = {"datasets": ["condqa", "bgqa1", "bgqa2", "bgqa3", "sharc"], "split": "dev",
                    "kinds": ["text", "code"], "seeds": [0], "n_per_class": 1, "limit": 4,
                    "threads": 1}
    write("configs/stub_smoke.json", json.dumps(smoke, indent=2) + "\n")

    probes = dict(base)
    probes["run"] = {"datasets": ["condqa", "bgqa1"], "split": "dev", "kinds": ["text", "code"],
                     "seeds": [0], "n_per_class": 1, "limit": 8, "threads": 1}
    write("configs/probe_smoke.json", json.dumps(probes, indent=2) + "\n")

    live = dict(base)
    live["model_id"] = "gpt-3.5-turbo"
    live["backend"] = "live"
    live["endpoint"] = {"base_url": "https://api.openai.com",
                        "path": "/v1/chat/completions",
                        "credential_env": "CODEPROMPT_API_KEY"}
    live["run"] = {"datasets": ["bgqa1"], "split": "dev", "kinds": ["text", "code"],
                   "seeds": [0], "n_per_class": 1, "limit": 10, "threads": 2}
    write("configs/live_example.json", json.dumps(live, indent=2) + "\n")


def main():
    n_dev, n_train = 24, 30

    condqa_dev, condqa_dev_meta = gen_condqa("dev", n_dev)
    condqa_train, condqa_train_meta = gen_condqa("train", n_train)
    condqa_rules(condqa_dev, condqa_dev_meta)
    condqa_rules(condqa_train, condqa_train_meta)
    condqa_generic_rules()

    bgqa_train_all = []
    for h in (1, 2, 3):
        dev, dev_meta = gen_bgqa(h, "dev", n_dev)
        train, train_meta = gen_bgqa(h, "train", n_train)
        bgqa_rules(dev, dev_meta)
        bgqa_rules(train, train_meta)
        bgqa_train_all.append((h, train, train_meta))
    bgqa_generic_rules()

    sharc_dev, sharc_dev_meta = gen_sharc("dev", n_dev)
    sharc_train, sharc_train_meta = gen_sharc("train", n_train)
    sharc_rules(sharc_dev, sharc_dev_meta)
    sharc_rules(sharc_train, sharc_train_meta)

    gen_demos(condqa_train, condqa_train_meta, bgqa_train_all, sharc_train, sharc_train_meta)
    gen_prices()
    gen_configs()

    write("fixtures/stub/script.json", json.dumps(
        {"rules": STUB_RULES, "default_response": "unknown"}, ensure_ascii=False, indent=1) + "\n")
    print(f"wrote {len(STUB_RULES)} stub rules")


if __name__ == "__main__":
    main()
