//! IRIs of the vocabularies the engine and reports refer to.

pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_INT: &str = "http://www.w3.org/2001/XMLSchema#int";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_DATE_TIME: &str = "http://www.w3.org/2001/XMLSchema#dateTime";

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";

pub const DCTERMS: &str = "http://purl.org/dc/terms/";
pub const DC_ELEMENTS: &str = "http://purl.org/dc/elements/1.1/";
pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";
pub const FOAF: &str = "http://xmlns.com/foaf/0.1/";
pub const CC: &str = "http://creativecommons.org/ns#";
pub const XHTML_VOCAB: &str = "http://www.w3.org/1999/xhtml/vocab#";
pub const SCHEMA: &str = "http://schema.org/";

pub const DQV: &str = "http://www.w3.org/ns/dqv#";
pub const PROV: &str = "http://www.w3.org/ns/prov#";
