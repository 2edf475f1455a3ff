"""Annotator-facing guideline text for every label.

Each entry gives the working definition, the sub-cases annotators meet
in practice, and worked example sentences.  The text is shown verbatim
in the help panel of the annotation console, so keep it plain prose.
"""

from __future__ import annotations

from .schema import EventType, InformationType

_NEGATION_NOTE = (
    "Negation note: negation is ignored at both levels, i.e. the category of "
    "a sentence is the same whether the sentence is affirmative or not."
)

_DATE_NOTE = (
    "Judge temporality against the article's publication date, treating it "
    "as if it were today."
)

HELP_TEXT: dict[EventType | InformationType, str] = {
    EventType.CURRENT_EVENT: f"""Current event — sentences tied to the situation that is new or ongoing at publication time. {_DATE_NOTE}

Use it for:
1. The main reported event. Example: "South Korea confirms two new African swine fever cases."
2. Recent events close in time or place to the main one. Example: "On Saturday, similar infections were found in 30 pigs on a farm in the Huangpu district of Guangzhou."
3. Aggregations running from a past date up to now. Example: "According to data from the Council of Agriculture, 94 poultry farms in Taiwan have been infected by avian flu so far this year." ("so far this year" ties the count to the publication date.)
4. The recent or current status of a disease in an area. Example: "In recent months, the disease has spread more rapidly and further west, affecting countries that were previously unscathed."
5. Events that will definitely happen, typically direct consequences already decided, such as control measures about to be applied. Example: "All pigs in the complex will be killed, and 3km and 10km protection and surveillance zones will be installed."

{_NEGATION_NOTE}""",
    EventType.OLD_EVENT: f"""Old event — sentences giving historical context for the main event, with explicit old dates, absolute ("In 2007") or relative ("Back in days"). {_DATE_NOTE}

Use it for:
1. A single old event. Example: "The most recent case of the disease in the UK came in 2007."
2. Aggregations between two past dates. Example: "During last year, 132 cases were recorded across the country."
3. The past status of a disease in an area. Example: "Between 2006 and 2010, BTV serotype 8 reached parts of north-western Europe that had never experienced bluetongue outbreaks previously."

{_NEGATION_NOTE}""",
    EventType.RISK_EVENT: f"""Risk event — sentences about hypothetical events, usually an area at risk of introduction or spread of a pathogen. {_DATE_NOTE}

Use it for:
1. An unaffected area expressing concern or preparedness. Example: "Additional outbreaks of African swine fever are likely to occur in China, despite nationwide disease control and prevention efforts."
2. An area whose disease status is unknown. Example: "If the outbreak is verified, all pigs at the feeding station will have to be culled, Miratorg said."

{_NEGATION_NOTE}""",
    EventType.GENERAL: f"""General — generic information about a disease or pathogen, untied to any specific event: hosts, clinical presentation, pathogenicity. Example: "Bluetongue is a viral disease of ruminants (e. g. cattle, sheep goats, deer)."

Sentences labelled General take the information type "general_epidemiology" when they describe the disease itself or how it is transmitted; the dedicated event-description and transmission-pathway types are not used under General.

{_NEGATION_NOTE}""",
    EventType.IRRELEVANT: f"""Irrelevant — sentences carrying no epidemiological information at all. These receive no information type; the second pass skips them.

Typical cases are disease-unrelated facts ("Pig imports from Hungary only represented about 0. 64 per cent of all pork products to the UK in 2017.") and article artefacts ("Comments will be moderated.").

{_NEGATION_NOTE}""",
    InformationType.DESCRIPTIVE_EPIDEMIOLOGY: f"""Descriptive epidemiology — the standard indicators describing an event: disease, location, hosts, dates.

Use it for:
1. The epidemiological description of the event. Example: "Cases of African swine fever (ASF) have been recorded in Odesa and Mykolaiv regions."
2. The pathogenic agent and its strain. Example: "Results indicated that the birds were infected with a new variety of H5N1 influenza."
3. Clinical signs, morbidity and mortality. Example: "The remaining buck appears healthy at this time and is showing no clinical signs associated with the disease."

{_NEGATION_NOTE}""",
    InformationType.DISTRIBUTION: f"""Distribution — the status of a disease in a specific area (administrative unit, country, continent).

Use it for:
1. Descriptions of the epidemiological status of an area. Example: "In recent months, the disease has spread more rapidly and further west, affecting countries that were previously unscathed."
2. Aggregations of events between a past date and a recent or current date. Example: "According to data from the Council of Agriculture, 94 poultry farms in Taiwan have been infected by avian flu so far this year."

{_NEGATION_NOTE}""",
    InformationType.PREVENTIVE_CONTROL_MEASURES: f"""Preventive and control measures — sanitary and physical actions against a disease.

Use it for:
1. Preventive measures keeping a disease out of an unaffected area. Example: "ASF: France about to end the fencing in the borderland with Belgium."
2. Control measures against a pathogen already present (vaccination, slaughtering, disinfection, zoning). Example: "All the infected animals have been killed, and the area has been disinfected."
3. Instructions and recommendations covering either. Example: "Hunters, travellers, and transporters are asked to take extra care concerning hygiene."

{_NEGATION_NOTE}""",
    InformationType.TRANSMISSION_PATHWAY: f"""Transmission pathway — the origin (source) of the pathogen or its route of transmission. Example: "The authorities suggest that the highly contagious virus might have been spread by a river."

This is a priority category: when a multi-topic sentence also matches other types, transmission pathway is selected as the main label.

{_NEGATION_NOTE}""",
    InformationType.CONCERN_RISK_FACTORS: f"""Concern and risk factors — a risk of introduction or spread of disease into an area.

Use it for:
1. Claimed or suspected risk factors (individual, behavioural or environmental characteristics associated with increased occurrence). Example: "A recent wave of inspections revealed 4,000 different biosecurity violations on farms and Gosvetfitosluzhba warned that this could result in further outbreaks soon."
2. Expressions of fear or concern about (i) the hypothetical introduction of a pathogen into an unaffected area, e.g. "ASF is a real threat to the UK, she said.", or (ii) a worrying evolution of the situation, e.g. "Several countries are affected, alarming governments and pig farmers due to the pace at which the disease has spread."

This is a priority category: when a multi-topic sentence also matches other types, concern and risk factors is selected as the main label.

{_NEGATION_NOTE}""",
    InformationType.ECONOMIC_POLITICAL_CONSEQUENCES: f"""Economic and political consequences — direct or indirect financial or political impacts of an outbreak on an area, typically resulting from preventive and control measures. Example: "Gorod estimated that financial losses due to ASF could amount to €17 million to Latvia's industry in 2017."

Because these impacts are consequences, a sentence describing both a measure (or the event itself) and its economic effects takes the cause's label, not this one.

{_NEGATION_NOTE}""",
    InformationType.GENERAL_EPIDEMIOLOGY: f"""General epidemiology — only used when the event type is General. It merges event description and transmission pathway for sentences about a disease in the abstract: hosts, pathogenicity, and way of transmission. Example: "The virus is transmitted by midge bites, and it does not affect humans."

{_NEGATION_NOTE}""",
}
