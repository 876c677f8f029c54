"""Well-known vocabularies and namespace helpers."""

from __future__ import annotations

from .terms import Iri


class Namespace(str):
    """A namespace string that mints IRIs via attribute or item access."""

    def term(self, local: str) -> Iri:
        return Iri(str(self) + local)

    def __getattr__(self, local: str) -> Iri:
        if local.startswith("__"):
            raise AttributeError(local)
        return self.term(local)

    def __getitem__(self, local):  # type: ignore[override]
        if isinstance(local, str):
            return self.term(local)
        return str.__getitem__(self, local)


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
SH = Namespace("http://www.w3.org/ns/shacl#")
EARL = Namespace("http://www.w3.org/ns/earl#")
PROV = Namespace("http://www.w3.org/ns/prov#")
DCTERMS = Namespace("http://purl.org/dc/terms/")
FOAF = Namespace("http://xmlns.com/foaf/0.1/")

STANDARD_PREFIXES = {
    "rdf": str(RDF),
    "rdfs": str(RDFS),
    "owl": str(OWL),
    "xsd": str(XSD),
}

RDF_TYPE = RDF.type


def split_iri(iri: str) -> tuple[str, str]:
    """Split an IRI into (namespace, local name) at the last ``#`` or ``/``."""
    cut = max(iri.rfind("#"), iri.rfind("/"))
    if cut < 0:
        cut = iri.rfind(":")
    return iri[: cut + 1], iri[cut + 1 :]


def local_name(iri: Iri | str) -> str:
    return split_iri(str(iri))[1]


def namespace_of(iri: Iri | str) -> str:
    return split_iri(str(iri))[0]
