"""Fixture repositories written to temporary directories by the tests."""

from __future__ import annotations

import json
from pathlib import Path

PREFIXES = """@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
"""

HMAS_NS = "https://purl.org/hmas/"

# seeded with: Artifact lacks rdfs:isDefinedBy, isMembershipOf/isMembershipIn
# are two edits apart, Workspace has no @en label
HMAS_MODULE = PREFIXES + """@prefix hmas: <https://purl.org/hmas/> .

<https://purl.org/hmas/> a owl:Ontology ;
    rdfs:label "hMAS core"@en .

hmas:Agent a owl:Class ;
    rdfs:label "Agent"@en ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .

hmas:Group a owl:Class ;
    rdfs:label "Group"@en ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .

hmas:Artifact a owl:Class ;
    rdfs:label "Artifact"@en .

hmas:Workspace a owl:Class ;
    rdfs:label "Workspace" ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .

hmas:isMembershipOf a owl:ObjectProperty ;
    rdfs:label "is membership of"@en ;
    rdfs:domain hmas:Agent ;
    rdfs:range hmas:Group ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .

hmas:isMembershipIn a owl:ObjectProperty ;
    rdfs:label "is membership in"@en-GB ;
    rdfs:domain hmas:Agent ;
    rdfs:range hmas:Workspace ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .
"""

HMAS_MODELET = PREFIXES + """@prefix hmas: <https://purl.org/hmas/> .

hmas:ResourceProfile a owl:Class ;
    rdfs:label "Resource profile"@en ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .

hmas:exposesSignifier a owl:ObjectProperty ;
    rdfs:label "exposes signifier"@en ;
    rdfs:domain hmas:ResourceProfile ;
    rdfs:isDefinedBy <https://purl.org/hmas/> .
"""

# hmas:hasCapability is not defined anywhere in the ontology
HMAS_DATASET = PREFIXES + """@prefix hmas: <https://purl.org/hmas/> .
@prefix ex: <http://example.org/> .

ex:alice a hmas:Agent ;
    hmas:isMembershipOf ex:team .
ex:team a hmas:Group .
ex:profile a hmas:ResourceProfile ;
    hmas:hasCapability ex:lamp .
"""

HMAS_QUERY = """PREFIX hmas: <https://purl.org/hmas/>
ASK { ?a a hmas:Agent ; hmas:isMembershipOf ?g . }
"""

HMAS_USE_CASE = PREFIXES + """@prefix hmas: <https://purl.org/hmas/> .
@prefix ex: <http://example.org/> .

ex:bob a hmas:Agent .
"""


def hmas_project() -> dict[str, str]:
    return {
        "src/hmas-core.ttl": HMAS_MODULE,
        "domains/interaction/profiles/onto.ttl": HMAS_MODELET,
        "domains/interaction/profiles/dataset.ttl": HMAS_DATASET,
        "domains/interaction/profiles/membership.rq": HMAS_QUERY,
        "use-cases/lab/lab.ttl": HMAS_USE_CASE,
    }


CLEAN_MODULE = PREFIXES + """@prefix ex: <https://example.org/onto#> .

<https://example.org/onto> a owl:Ontology .

ex:Sensor a owl:Class ;
    rdfs:label "Sensor"@en ;
    rdfs:isDefinedBy <https://example.org/onto> .

ex:Observation a owl:Class ;
    rdfs:label "Observation"@en ;
    rdfs:isDefinedBy <https://example.org/onto> .

ex:madeBySensor a owl:ObjectProperty ;
    rdfs:label "made by sensor"@en ;
    rdfs:domain ex:Observation ;
    rdfs:range ex:Sensor ;
    rdfs:isDefinedBy <https://example.org/onto> .
"""

CLEAN_MODELET = PREFIXES + """@prefix ex: <https://example.org/onto#> .

ex:Platform a owl:Class ;
    rdfs:label "Platform"@en ;
    rdfs:isDefinedBy <https://example.org/onto> .
"""

CLEAN_DATASET = PREFIXES + """@prefix ex: <https://example.org/onto#> .
@prefix data: <http://example.org/> .

data:obs1 a ex:Observation ;
    ex:madeBySensor data:s1 .
"""

CLEAN_QUERY = """PREFIX ex: <https://example.org/onto#>
SELECT ?o WHERE { ?o a ex:Observation }
"""


def clean_project() -> dict[str, str]:
    return {
        "src/sensing.ttl": CLEAN_MODULE,
        "domains/env/monitoring/onto.ttl": CLEAN_MODELET,
        "domains/env/monitoring/dataset.ttl": CLEAN_DATASET,
        "domains/env/monitoring/cq1.rq": CLEAN_QUERY,
        ".acimov/parameters.json": json.dumps({"ontology_namespace": "https://example.org/onto#"}),
    }


BROKEN_MODULE = PREFIXES + """@prefix ex: <https://example.org/onto#> .

ex:Broken a owl:Class
    rdfs:label "missing semicolon"@en .
"""


def syntax_error_project() -> dict[str, str]:
    files = clean_project()
    files["src/broken.ttl"] = BROKEN_MODULE
    return files


DISJOINT_UNION = PREFIXES + """@prefix ex: <http://example.org/> .

ex:Person owl:disjointUnionOf ( ex:Adult ex:Minor ) .
"""

REFLEXIVE = PREFIXES + """@prefix ex: <http://example.org/> .

ex:knows a owl:ObjectProperty , owl:ReflexiveProperty .
"""

SAME_DIFFERENT = PREFIXES + """@prefix ex: <http://example.org/> .

ex:a owl:sameAs ex:b .
ex:a owl:differentFrom ex:b .
"""

DISJOINT_MEMBER = PREFIXES + """@prefix ex: <http://example.org/> .

ex:C owl:disjointWith ex:D .
ex:x rdf:type ex:C .
ex:x rdf:type ex:D .
"""


def write_project(root: Path, files: dict[str, str]) -> Path:
    for rel, text in files.items():
        p = root / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return root


def module_text(i: int, ns: str = "https://example.org/onto#") -> str:
    return PREFIXES + f"""@prefix ex: <{ns}> .

ex:Kind{i}Thing a owl:Class ;
    rdfs:label "kind {i} thing"@en ;
    rdfs:isDefinedBy <https://example.org/onto> .
"""


def sized_project(n_modules: int, n_scenarios: int) -> dict[str, str]:
    """A project of roughly ``n_modules + 3 * n_scenarios`` files."""
    files = {".acimov/parameters.json": json.dumps({"ontology_namespace": "https://example.org/onto#"})}
    names = ["Alpha", "Bravo", "Charlie", "Delta", "Echo", "Foxtrot", "Golf", "Hotel", "India", "Juliet"]
    for i in range(n_modules):
        files[f"src/m{i}.ttl"] = module_text(i).replace(f"Kind{i}Thing", f"{names[i % 10]}{i}Component")
    for j in range(n_scenarios):
        base = f"domains/d{j}/s{j}"
        files[f"{base}/onto.ttl"] = module_text(j).replace(f"Kind{j}Thing", f"{names[j % 10]}Scenario{j}Part")
        files[f"{base}/dataset.ttl"] = PREFIXES + f"""@prefix ex: <https://example.org/onto#> .
@prefix data: <http://example.org/> .

data:item{j} a ex:{names[j % 10]}Scenario{j}Part .
"""
        files[f"{base}/cq{j}.rq"] = f"PREFIX ex: <https://example.org/onto#>\nSELECT ?x WHERE {{ ?x a ex:{names[j % 10]}Scenario{j}Part }}\n"
    return files
