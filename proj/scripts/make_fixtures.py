#!/usr/bin/env python3
"""Writes the pinned prompt-example corpus under fixtures/appendix_n/.

The golden files hold full prompt bundles in the serialized form the test
suite compares against ([role] header lines followed by raw content). They are
transcribed by hand here, independently of the C++ builders, so builder bugs
cannot leak into the expectations.
"""

import json
import os

ROOT = os.path.join(os.path.dirname(__file__), "..")
AN = os.path.join(ROOT, "fixtures", "appendix_n")


def write(relpath, content):
    path = os.path.join(AN, relpath)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(content)


def bundle(*messages):
    out = []
    for role, content in messages:
        out.append(f"[{role}]\n{content}\n")
    return "".join(out)


# ---------------------------------------------------------------------------
# CondQA: the special-guardian example
# ---------------------------------------------------------------------------

GUARDIAN_SCENARIO = (
    "My brother and his wife are in prison for carrying out a large fraud scheme. "
    "Their 7 and 8 year old children have been living with me for the last 4 years. "
    "I want to become their Special Guardian to look after them permanently."
)
GUARDIAN_QUESTION = "How long will it be before I hear back from the court?"

GUARDIAN_CONTENTS = [
    "<h1>What is a special guardian</h1>",
    "<p>You can apply to be a child’s special guardian when they cannot live with their birth parents and adoption is not right for them.</p>",
    "<p>You’ll be responsible for looking after the child until they’re 18 (unless the court takes your responsibility away earlier).</p>",
    "<p>You’ll make all day to day decisions about the child, for example schooling and medical treatment. You do not have to discuss these decisions with the birth parents.</p>",
    "<p>You’ll need to get the consent of everyone who has parental responsibility for the child before you make some important decisions, for example:</p>",
    "<li>changing the child’s surname</li>",
    "<li>putting the child up for adoption</li>",
    "<li>taking the child abroad for more than 3 months</li>",
    "<li>the child having surgery for reasons other than improving health, such as circumcision, sterilisation or cosmetic surgery</li>",
    "<p>If you cannot get consent, you can ask the court to decide. Use the form ‘Make an application in existing court proceedings related to children’ (form C2).</p>",
    "<h1>After you apply</h1>",
    "<p>Within 10 days of receiving your application the court will send you a case number and a date for a meeting to set out:</p>",
    "<li>a timetable for your case</li>",
    "<li>how it will be dealt with</li>",
    "<p>This meeting is called a ‘first directions hearing’.</p>",
    "<p>You must go to all hearings you’re told to unless the court excuses you. If you’re not able to go, contact the court office.</p>",
]

GUARDIAN_EVIDENCES = [GUARDIAN_CONTENTS[1], GUARDIAN_CONTENTS[11]]

GUARDIAN_RECORD = {
    "id": "condqa_guardian",
    "url": "https://www.gov.uk/apply-special-guardian",
    "scenario": GUARDIAN_SCENARIO,
    "question": GUARDIAN_QUESTION,
    "answers": [["Within 10 days", []]],
    "evidences": GUARDIAN_EVIDENCES,
    "contents": GUARDIAN_CONTENTS,
}

# The probe example reuses the same instance with a yes/no answer format.
GUARDIAN_YN_RECORD = dict(GUARDIAN_RECORD, id="condqa_guardian_yn", answers=[["yes", []]])

CONDQA_TEXT_SYSTEM = (
    "You are a helpful assistant that answers questions given a document. Answers must be a "
    "short span of the document. You have to extract the span from the document. Do not write "
    "anything else. I will give you some examples first."
)

CONDQA_SPAN_FORMAT = (
    "Answers must be a short span of the document. You have to extract the span from the "
    "document. Do not write anything else."
)
CONDQA_CODE_SPAN_FORMAT = (
    "Answers must be a short span of the document. You have to extract the span from the code "
    "comments. Do not write anything else."
)

condqa_text_user = (
    "Question: " + GUARDIAN_SCENARIO + " " + GUARDIAN_QUESTION + "\n\n"
    "Document: " + "\n\n".join(GUARDIAN_CONTENTS) + "\n"
    + CONDQA_SPAN_FORMAT + " Let's think step by step:"
)

CONDQA_CODE_SYSTEM = (
    "You are a helpful assistant. Your task is to process a pseudo-code that describes a "
    "question and a document. You need to reason using that document and the comments to return "
    "the answers. Answers must be a short span of the document. You have to extract the span "
    "from the code comments. Do not write anything else. I will give you some examples first."
)

GUARDIAN_CODE = """maximum_redundancy_pay = 16320

housing_standards_and_procedures_in_Northern_Ireland = True

ensure_vehicle_taxed_in_UK = True
immigration_advisers_can_help_with_representation_at_tribunal = True

supply_protective_clothing_and_equipment = True

CBT_required_for_moped_and_motorcycle = True

court_response_time = None # This is the variable that answers the question

# {c0}

# {c1}

if attorneys_appointed_jointly:

    all_attorneys_must_agree_to_make_decision = True

disability_or_severe_disability_element_of_working_tax_credit = True

mugging_without_physical_harm_emergency = True

# {c2}

work_temporarily_for_hirer = True

# {c3}

accounts_and_tax_returns_cover_financial_year = "1 June to 31 May"

employer_operating_PAYE = True

# {c4}

# {c5}

# {c6}

# {c7}

# {c8}

managed_by_fit_and_proper_persons = True

check_court_order_for_authorization = True

considering_fostering = True

if not_connected_to_mains_sewer:

    septic_tank_used = True

can_claim_tax_relief_if_taxed_twice = True

extra_support_for_disability = True

if operator_of_septic_tank_or_treatment_plant:

    follow_general_binding_rules = True

# {c9}

appeals_decision_time = "several months"

if worker and informal_resolution_not_satisfactory:

    formal_grievance_complaint_possible = True

    time_limit_for_backdating_claims_services = 6

# {c10}

# {c11}

# {c12}

# {c13}

# {c14}

committee_recommendations_go_to_Prime_Minister = True

check_adviser_registration = True

meet_manning_levels = True

recognised_as_charity_or_CASC = True

apply_for_visa_for_other_reasons = True

debt_paid_off = True

if special_educational_needs_and_disabilities:

    affects_behaviour_or_socialisation = True

# {c15}

payslip_can_include_tax_code = True

VAT_zero_rate = 0

gas_equipment_installed_and_maintained_by_Gas_Safe_registered_engineer = True""".format(
    **{f"c{i}": text for i, text in enumerate(GUARDIAN_CONTENTS)}
)

condqa_code_user = (
    "# Question: " + GUARDIAN_SCENARIO + " " + GUARDIAN_QUESTION + "\n\n"
    + GUARDIAN_CODE + "\n\n"
    "# Question: " + GUARDIAN_SCENARIO + " " + GUARDIAN_QUESTION + "\n\n"
    "# " + CONDQA_CODE_SPAN_FORMAT + "\n\n"
    "# Let's think step by step:"
)

# ---------------------------------------------------------------------------
# BGQA-1: the amberjack example
# ---------------------------------------------------------------------------

BGQA_EXAMPLE = (
    "A few players are playing a boardgame\n\n"
    "The current state of the game is as follows\n\n"
    "The amberjack struggles to find food\n\n"
    "And the rules of the game are as follows\n\n"
    "Rule1: If the amberjack has difficulty to find food, then the amberjack removes from the "
    "board one of the pieces of the carp\n\n"
    "Based on the game state and the rules and preferences, does the amberjack remove from the "
    "board one of the pieces of the carp?"
)

BGQA_PROOF = (
    "The amberjack struggles to find food, so the amberjack has difficulty to find food.\n"
    "Rule1 applies: the amberjack removes from the board one of the pieces of the carp.\n"
    "So the answer is yes."
)

BGQA_RECORD = {
    "id": "bgqa1_amberjack",
    "example": BGQA_EXAMPLE,
    "proof": BGQA_PROOF,
    "label": "proved",
    "facts": ["The amberjack struggles to find food"],
    "rules": [
        "Rule1: If the amberjack has difficulty to find food, then the amberjack removes from "
        "the board one of the pieces of the carp"
    ],
}

BGQA_TEXT_SYSTEM = (
    "You are a question-answering system that solves the problem of reasoning with "
    "contradictory information guided by preferences over sources of information. You must "
    "explain your answers step by step."
)

BGQA_CODE_SYSTEM = (
    "You are a large language model of code that can interpret code. You are given a "
    "pseudo-code that resembles to first-order logic that models some scenario. You will be "
    "given a question and you have to answer it step by step. You can use a rule if and only if "
    "you know the antecedent of the rule."
)

BGQA_CODE = (
    "# A few players are playing a boardgame\n\n"
    "# The rules of the game are as follows\n\n"
    "# Rule1: If the amberjack has difficulty to find food, then the amberjack removes from the "
    "board one of the pieces of the carp.\n\n"
    "rule1() = difficulty_finding_food(amberjack) => remove_piece(amberjack, carp)\n\n"
    "# The current state of the game is as follows\n\n"
    "# The amberjack struggles to find food.\n\n"
    "difficulty_finding_food(amberjack) = True\n\n"
    "# Based on the game state and the rules and preferences, does the amberjack remove from "
    "the board one of the pieces of the carp?\n\n"
    "question = remove_piece(amberjack, carp)"
)

# ---------------------------------------------------------------------------
# ShARC: the zero-VAT example
# ---------------------------------------------------------------------------

SHARC_SNIPPET = (
    "## Items that qualify for the zero rate\n\n"
    "You may be able to apply zero VAT when you sell the following to an eligible charity:\n\n"
    "* equipment for making ‘talking’ books and newspapers\n\n"
    "* lifeboats and associated equipment, including fuel\n\n"
    "* medicine or ingredients for medicine\n\n"
    "* resuscitation training models"
)

SHARC_SCENARIO = (
    "The item is not equipment for audio books or newspapers, and I'm not selling lifeboats or "
    "anything related to that. It's for medicine and medicinal ingredients."
)
SHARC_QUESTION = "Can I apply zero VAT to this item?"

SHARC_HISTORY = [
    ("Is it equipment for making ‘talking’ books and newspapers?", "No"),
    ("Are you selling lifeboats and associated equipment, including fuel?", "No"),
    ("Are you selling medicine or ingredients for medicine?", "Yes"),
]

SHARC_RECORD = {
    "utterance_id": "sharc_vat",
    "snippet": SHARC_SNIPPET,
    "question": SHARC_QUESTION,
    "scenario": SHARC_SCENARIO,
    "history": [
        {"follow_up_question": q, "follow_up_answer": a} for q, a in SHARC_HISTORY
    ],
    "answer": "yes",
}

SHARC_TEXT_SYSTEM = (
    "You are a question answering system that answers questions given a document and a "
    "conversation history. The conversation history gives information about the background of "
    "the person posing the question. You must answer `yes`, `no`, or `not enough information` "
    "to the question and nothing else."
)

sharc_text_user = (
    "Question: " + SHARC_SCENARIO + " " + SHARC_QUESTION + "\n"
    "Document:\n\n" + SHARC_SNIPPET + "\n\n"
    "Conversation history:\n\n"
    + "\n\n".join(f"Q: {q}\n\nA: {a}" for q, a in SHARC_HISTORY) + "\n\n"
    "What is the answer to the question: " + SHARC_QUESTION +
    " You must answer `yes`, `no`, or `not enough information` to the question and nothing else."
)

SHARC_CODE_SYSTEM = (
    "You are a question-answering system that answers questions based on a document, and "
    "conversation history. The text is pseudo-code that models the document and conversation "
    "history. You must run the code and update the value of the variable that answers the "
    "question. The values can be True, False, or None."
)

SHARC_CODE = (
    "# Question:\n"
    "# " + SHARC_SCENARIO + " " + SHARC_QUESTION + "\n\n"
    "equipment_for_audio_books_or_newspapers = False\n\n"
    "selling_lifeboats_or_related_equipment = False\n\n"
    "selling_medicine_or_ingredients_for_medicine = True\n\n"
    "can_apply_zero_VAT = None # This is the variable that answers the question.\n\n"
    "# Other variables needed for the document:\n\n"
    "# Document:\n\n"
    "## Items that qualify for the zero rate\n\n"
    "# You may be able to apply zero VAT when you sell the following to an eligible charity:\n\n"
    "# * equipment for making ‘talking’ books and newspapers\n\n"
    "if equipment_for_audio_books_or_newspapers:\n\n"
    "    can_apply_zero_VAT = False\n\n"
    "# * lifeboats and associated equipment, including fuel\n\n"
    "if selling_lifeboats_or_related_equipment:\n\n"
    "    can_apply_zero_VAT = False\n\n"
    "# * medicine or ingredients for medicine\n\n"
    "if selling_medicine_or_ingredients_for_medicine:\n\n"
    "    can_apply_zero_VAT = True\n\n"
    "# * resuscitation training models\n\n"
    "resuscitation_training_models = None"
)

sharc_code_user = SHARC_CODE + "\n\ncan_apply_zero_VAT = "

# ---------------------------------------------------------------------------
# Variable-tracking probe example
# ---------------------------------------------------------------------------

PROBE_PARTIAL_COT = (
    "<p>Within 10 days of receiving your application the court will send you a case number and "
    "a date for a meeting to set out:</p>\n"
)

PROBE_FACT = "the children have been living with me for the last 4 years"

PROBE_LINE = (
    "Now, I want to ask you about the value of some key entities you used. Your answers must be "
    "`True`, `False`, `unknown`, or a string. It is very important that you only write the "
    "exact value. From the speaker perspective, is it true that " + PROBE_FACT + "?"
)

probe_base_user = (
    "Question: " + GUARDIAN_SCENARIO + " " + GUARDIAN_QUESTION + "\n\n"
    "Document: " + "\n\n".join(GUARDIAN_CONTENTS) + "\n"
    'Answers can be "yes" or "no". ' + "Let's think step by step:"
)

# ---------------------------------------------------------------------------
# Standalone code blocks (parser corpus)
# ---------------------------------------------------------------------------

ESTATE_BLOCK = (
    "# <p>You can apply to become the estate’s administrator if you are 18 or over and you "
    "are the most ‘entitled’ inheritor of the deceased’s estate. This is usually "
    "the deceased’s closest living relative.</p>\n"
    "if applicant_age >= 18 and entitled_inheritor and closest_relative:\n"
    "    can_apply_estate_administrator = True"
)

PREDICATE_RULE_BLOCK = (
    "# Rule2: Be careful when something removes from the board one of the pieces of the dog and "
    "also becomes an enemy of the catfish because in this case it will surely not burn the "
    "warehouse of the mosquito (this may or may not be problematic)\n"
    "rule2(something) = remove(something, piece_of(dog)) & enemy(something, catfish) => "
    "not burn(something, warehouse_of(mosquito))"
)

ASYLUM_ORIGINAL = (
    "# <p>To be eligible you must have left your country and be unable to go back because you "
    "fear persecution.</p>\n"
    "if left_country_and_fear_persecution:\n"
    "    eligible_for_asylum = True"
)

# The pinned anonymous-code block drops the ':' after the if header.
ASYLUM_ANONYMOUS = (
    "# <p>To be eligible you must have left your country and be unable to go back because you "
    "fear persecution.</p>\n"
    "if var_1\n"
    "    var_2 = True"
)

ASYLUM_RANDOM = (
    "# <p>To be eligible you must have left your country and be unable to go back because you "
    "fear persecution.</p>\n"
    "if value_of_property_gone_down_by_more_than_50:\n"
    "    eligible_to_claim = True\n"
    "    getting_housing_benefit = True"
)

# The overview-figure example: a ConditionalQA instance about widow benefits.
WIDOW_BENEFITS = (
    "# Question: My husband recently passed away and I am looking into what benefits I may be "
    "entitled to. What benefits can I get?\n\n"
    "husband_pass_away = True\n\n"
    "looking_into_benefits = True\n\n"
    "benefits_entitled = None # This is the variable that answers the question\n\n"
    "# Document:\n\n"
    "# <h1>Bereavement Support Payment</h1>\n\n"
    "# <p>You may be able to get Bereavement Support Payment if your husband, wife or civil "
    "partner died in the last 21 months.</p>\n\n"
    "if husband_pass_away and died_in_last_21_months:\n\n"
    "    eligible_bereavement_support_payment = True\n\n"
    "# <p>You must claim within 3 months of your partner’s death to get the full amount.</p>\n\n"
    "if claim_within_3_months:\n\n"
    "    full_amount = True"
)

# ---------------------------------------------------------------------------
# Write everything
# ---------------------------------------------------------------------------

def main():
    write("instances/condqa_guardian.jsonl", json.dumps(GUARDIAN_RECORD, ensure_ascii=False) + "\n")
    write("instances/condqa_guardian_yn.jsonl", json.dumps(GUARDIAN_YN_RECORD, ensure_ascii=False) + "\n")
    write("instances/bgqa1_amberjack.jsonl", json.dumps(BGQA_RECORD, ensure_ascii=False) + "\n")
    write("instances/sharc_vat.jsonl", json.dumps(SHARC_RECORD, ensure_ascii=False) + "\n")

    write("generated_code/condqa_guardian.txt", GUARDIAN_CODE)
    write("generated_code/bgqa1_amberjack.txt", BGQA_CODE)
    write("generated_code/sharc_vat.txt", SHARC_CODE)

    write("golden/condqa_text.txt", bundle(("system", CONDQA_TEXT_SYSTEM), ("user", condqa_text_user)))
    write("golden/condqa_code.txt", bundle(("system", CONDQA_CODE_SYSTEM), ("user", condqa_code_user)))
    write("golden/bgqa1_text.txt", bundle(("system", BGQA_TEXT_SYSTEM), ("user", BGQA_EXAMPLE)))
    write("golden/bgqa1_code.txt", bundle(("system", BGQA_CODE_SYSTEM), ("user", BGQA_CODE)))
    write("golden/sharc_text.txt", bundle(("system", SHARC_TEXT_SYSTEM), ("user", sharc_text_user)))
    write("golden/sharc_code.txt", bundle(("system", SHARC_CODE_SYSTEM), ("user", sharc_code_user)))
    write("golden/probe_condqa_text.txt",
          bundle(("system", CONDQA_TEXT_SYSTEM),
                 ("user", probe_base_user),
                 ("assistant", PROBE_PARTIAL_COT),
                 ("user", PROBE_LINE)))

    write("code_blocks/widow_benefits.txt", WIDOW_BENEFITS)
    write("code_blocks/estate_administrator.txt", ESTATE_BLOCK)
    write("code_blocks/predicate_rule.txt", PREDICATE_RULE_BLOCK)
    write("code_blocks/asylum_original.txt", ASYLUM_ORIGINAL)
    write("code_blocks/asylum_anonymous.txt", ASYLUM_ANONYMOUS)
    write("code_blocks/asylum_random.txt", ASYLUM_RANDOM)
    print("fixtures written under", os.path.abspath(AN))


if __name__ == "__main__":
    main()
