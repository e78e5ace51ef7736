//! Model specification: an ordered list of effects defining the parameter
//! vector layout.

use crate::attributes::{AttributeKind, AttributeSet};
use crate::{Error, Result};

pub const DEFAULT_LAMBDA: f64 = 2.0;

/// A model term. Attribute-bound variants carry the column index within the
/// matching column list of an [`AttributeSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EffectKind {
    Arc,
    Reciprocity,
    Isolates,
    AinS,
    AoutS,
    AtT,
    AtC,
    AktD,
    AktU,
    A2pT,
    A2pD,
    A2pU,
    A2pTd,
    Sender(usize),
    Receiver(usize),
    Interaction(usize),
    Matching(usize),
    Mismatching(usize),
    MatchingReciprocity(usize),
    MismatchingReciprocity(usize),
    ContinuousSender(usize),
    ContinuousReceiver(usize),
    Diff(usize),
}

const STRUCTURAL: &[(&str, EffectKind)] = &[
    ("Arc", EffectKind::Arc),
    ("Reciprocity", EffectKind::Reciprocity),
    ("Isolates", EffectKind::Isolates),
    ("AinSpread", EffectKind::AinS),
    ("AoutSpread", EffectKind::AoutS),
    ("AltTwoPathT", EffectKind::A2pT),
    ("AltTwoPathD", EffectKind::A2pD),
    ("AltTwoPathU", EffectKind::A2pU),
    ("AltTwoPathTD", EffectKind::A2pTd),
    ("AltKTrianglesT", EffectKind::AtT),
    ("AltKTrianglesC", EffectKind::AtC),
    ("AltKTrianglesD", EffectKind::AktD),
    ("AltKTrianglesU", EffectKind::AktU),
];

type AttrCtor = fn(usize) -> EffectKind;

const ATTRIBUTE: &[(&str, AttributeKind, AttrCtor)] = &[
    ("Sender", AttributeKind::Binary, EffectKind::Sender),
    ("Receiver", AttributeKind::Binary, EffectKind::Receiver),
    ("Interaction", AttributeKind::Binary, EffectKind::Interaction),
    ("Matching", AttributeKind::Categorical, EffectKind::Matching),
    ("Mismatching", AttributeKind::Categorical, EffectKind::Mismatching),
    (
        "MatchingReciprocity",
        AttributeKind::Categorical,
        EffectKind::MatchingReciprocity,
    ),
    (
        "MismatchingReciprocity",
        AttributeKind::Categorical,
        EffectKind::MismatchingReciprocity,
    ),
    (
        "ContinuousSender",
        AttributeKind::Continuous,
        EffectKind::ContinuousSender,
    ),
    (
        "ContinuousReceiver",
        AttributeKind::Continuous,
        EffectKind::ContinuousReceiver,
    ),
    ("Diff", AttributeKind::Continuous, EffectKind::Diff),
];

impl EffectKind {
    /// Whether the statistic carries a damping parameter λ.
    pub fn is_alternating(self) -> bool {
        use EffectKind::*;
        matches!(
            self,
            AinS | AoutS | AtT | AtC | AktD | AktU | A2pT | A2pD | A2pU | A2pTd
        )
    }

    pub fn attribute(self) -> Option<(AttributeKind, usize)> {
        use EffectKind::*;
        match self {
            Sender(c) | Receiver(c) | Interaction(c) => Some((AttributeKind::Binary, c)),
            Matching(c) | Mismatching(c) | MatchingReciprocity(c) | MismatchingReciprocity(c) => {
                Some((AttributeKind::Categorical, c))
            }
            ContinuousSender(c) | ContinuousReceiver(c) | Diff(c) => Some((AttributeKind::Continuous, c)),
            _ => None,
        }
    }

    /// Config-file name of the effect, without any attribute column.
    pub fn config_name(self) -> &'static str {
        if let Some(&(name, _)) = STRUCTURAL.iter().find(|(_, k)| *k == self) {
            return name;
        }
        let (kind, col) = self.attribute().expect("attribute effect");
        ATTRIBUTE
            .iter()
            .find(|(_, k, ctor)| *k == kind && ctor(col) == self)
            .map(|&(name, _, _)| name)
            .expect("every effect kind has a name")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    pub kind: EffectKind,
    pub lambda: f64,
    name: String,
}

impl Effect {
    pub fn structural(kind: EffectKind) -> Self {
        assert!(kind.attribute().is_none(), "{kind:?} needs an attribute");
        Effect {
            kind,
            lambda: DEFAULT_LAMBDA,
            name: kind.config_name().to_string(),
        }
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// Display name: `AinSpread`, `Sender_gender`, ...
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Parses `Name`, `Name(lambda)` for alternating effects, or
    /// `Name(column)` for attribute effects. Names are exact.
    pub fn parse(spec: &str, attrs: &AttributeSet) -> Result<Effect> {
        let spec = spec.trim();
        let (base, arg) = match spec.find('(') {
            Some(open) => {
                let close = spec
                    .rfind(')')
                    .filter(|&c| c == spec.len() - 1 && c > open)
                    .ok_or_else(|| Error::Model(format!("malformed effect '{spec}'")))?;
                (spec[..open].trim(), Some(spec[open + 1..close].trim()))
            }
            None => (spec, None),
        };
        if let Some(&(_, kind)) = STRUCTURAL.iter().find(|(n, _)| *n == base) {
            let mut effect = Effect::structural(kind);
            if let Some(arg) = arg {
                if !kind.is_alternating() {
                    return Err(Error::Model(format!("{base} takes no argument")));
                }
                effect.lambda = arg
                    .parse()
                    .map_err(|_| Error::Model(format!("bad lambda '{arg}' for {base}")))?;
            }
            effect.validate(attrs)?;
            return Ok(effect);
        }
        if let Some(&(_, attr_kind, ctor)) = ATTRIBUTE.iter().find(|(n, _, _)| *n == base) {
            let column = arg
                .filter(|a| !a.is_empty())
                .ok_or_else(|| Error::Model(format!("{base} needs an attribute column")))?;
            let idx = attrs
                .find(attr_kind, column)
                .ok_or_else(|| Error::Model(format!("{base}({column}): no {attr_kind} attribute named '{column}'")))?;
            return Ok(Effect {
                kind: ctor(idx),
                lambda: DEFAULT_LAMBDA,
                name: format!("{base}_{column}"),
            });
        }
        Err(Error::Model(format!("unknown effect '{base}'")))
    }

    fn validate(&self, attrs: &AttributeSet) -> Result<()> {
        if self.kind.is_alternating() && !(self.lambda >= 1.0 && self.lambda.is_finite()) {
            return Err(Error::Model(format!(
                "{}: lambda must be >= 1, got {}",
                self.name, self.lambda
            )));
        }
        if let Some((kind, col)) = self.kind.attribute() {
            let ok = match kind {
                AttributeKind::Binary => col < attrs.binary.len(),
                AttributeKind::Categorical => col < attrs.categorical.len(),
                AttributeKind::Continuous => col < attrs.continuous.len(),
            };
            if !ok {
                return Err(Error::Model(format!(
                    "{}: {kind} column {col} does not exist",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ModelSpec {
    effects: Vec<Effect>,
}

impl ModelSpec {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parses each entry with [`Effect::parse`]; duplicate names are rejected.
    pub fn parse<S: AsRef<str>>(specs: &[S], attrs: &AttributeSet) -> Result<Self> {
        let mut model = ModelSpec::new();
        for s in specs {
            model.push(Effect::parse(s.as_ref(), attrs)?)?;
        }
        Ok(model)
    }

    /// Structural-only model with default λ.
    pub fn structural(kinds: &[EffectKind]) -> Self {
        ModelSpec {
            effects: kinds.iter().map(|&k| Effect::structural(k)).collect(),
        }
    }

    pub fn push(&mut self, effect: Effect) -> Result<()> {
        if self.index_of(effect.name()).is_some() {
            return Err(Error::Model(format!("duplicate effect {}", effect.name())));
        }
        self.effects.push(effect);
        Ok(())
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.effects.iter().map(|e| e.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.effects.iter().position(|e| e.name == name)
    }

    pub fn contains(&self, kind: EffectKind) -> bool {
        self.effects.iter().any(|e| e.kind == kind)
    }

    /// Copy of the model without the named effects.
    pub fn without(&self, names: &[&str]) -> ModelSpec {
        ModelSpec {
            effects: self
                .effects
                .iter()
                .filter(|e| !names.contains(&e.name()))
                .cloned()
                .collect(),
        }
    }

    pub fn validate(&self, attrs: &AttributeSet) -> Result<()> {
        self.effects.iter().try_for_each(|e| e.validate(attrs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn attrs() -> AttributeSet {
        let mut a = AttributeSet::new(2);
        a.add_binary("gender", vec![Some(true), Some(false)]).unwrap();
        a.add_categorical("region", vec![Some(0), Some(1)]).unwrap();
        a.add_continuous("age", vec![Some(20.0), Some(30.0)]).unwrap();
        a
    }

    #[test]
    fn parses_every_config_name() {
        let a = attrs();
        let names = [
            "Arc",
            "Reciprocity",
            "Isolates",
            "AinSpread",
            "AoutSpread",
            "AltTwoPathT",
            "AltTwoPathD",
            "AltTwoPathU",
            "AltTwoPathTD",
            "AltKTrianglesT",
            "AltKTrianglesC",
            "AltKTrianglesD",
            "AltKTrianglesU",
            "Sender(gender)",
            "Receiver(gender)",
            "Interaction(gender)",
            "Matching(region)",
            "Mismatching(region)",
            "MatchingReciprocity(region)",
            "MismatchingReciprocity(region)",
            "ContinuousSender(age)",
            "ContinuousReceiver(age)",
            "Diff(age)",
        ];
        let m = ModelSpec::parse(&names, &a).unwrap();
        assert_eq!(m.len(), 23);
        for (e, spec) in m.effects().iter().zip(names) {
            let base = spec.split('(').next().unwrap();
            assert_eq!(e.kind.config_name(), base);
        }
        assert_eq!(m.effects()[13].name(), "Sender_gender");
    }

    #[test]
    fn lambda_argument() {
        let a = attrs();
        let e = Effect::parse("AinSpread(3.5)", &a).unwrap();
        assert_eq!(e.lambda, 3.5);
        assert!(Effect::parse("AinSpread(0.5)", &a).is_err());
        assert!(Effect::parse("Reciprocity(2)", &a).is_err());
    }

    #[test]
    fn attribute_errors() {
        let a = attrs();
        assert!(Effect::parse("Sender(region)", &a).is_err());
        assert!(Effect::parse("Sender", &a).is_err());
        assert!(Effect::parse("Matching(nope)", &a).is_err());
        assert!(Effect::parse("Bogus", &a).is_err());
        assert!(Effect::parse("Sender(gender", &a).is_err());
        assert!(ModelSpec::parse(&["Arc", "Arc"], &a).is_err());
    }
}
