//! Parsing of algorithm and size-grid arguments.

use anyhow::{bail, Context};
use repeval_core::curve::{make_grid, StubCurve};
use repeval_core::probe::{LearningAlgorithm, ProbeSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum AlgChoice {
    Learner(LearningAlgorithm),
    Stub(StubCurve),
}

/// Probe hyperparameter overrides.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProbeOverrides {
    pub width: Option<usize>,
    pub learning_rate: Option<f64>,
    pub steps: Option<usize>,
    pub batch_size: Option<usize>,
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> anyhow::Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    s.parse().with_context(|| format!("bad {what} {s:?}"))
}

pub fn parse_alg(text: &str, o: ProbeOverrides) -> anyhow::Result<AlgChoice> {
    let parts: Vec<&str> = text.split(':').collect();
    let choice = match parts.as_slice() {
        ["probe", "mlp2"] | ["probe"] | ["mlp2"] => {
            AlgChoice::Learner(LearningAlgorithm::Probe(ProbeSpec::default()))
        }
        ["probe", "mlp2", w] => {
            AlgChoice::Learner(LearningAlgorithm::Probe(ProbeSpec::mlp2(num(w, "width")?)))
        }
        ["probe", "linear"] | ["linear"] => {
            AlgChoice::Learner(LearningAlgorithm::Probe(ProbeSpec::linear()))
        }
        ["gf2"] | ["gf2_parity"] => AlgChoice::Learner(LearningAlgorithm::Gf2Parity),
        ["marginal"] | ["constant"] => AlgChoice::Learner(LearningAlgorithm::ConstantMarginal),
        ["label-copy"] | ["identity"] => AlgChoice::Learner(LearningAlgorithm::LabelCopy),
        ["stub", "inverse"] => AlgChoice::Stub(StubCurve::Inverse { scale: 1.0 }),
        ["stub", "inverse", s] => AlgChoice::Stub(StubCurve::Inverse {
            scale: num(s, "scale")?,
        }),
        ["stub", "power", f, s, e] => AlgChoice::Stub(StubCurve::PowerLaw {
            floor: num(f, "floor")?,
            scale: num(s, "scale")?,
            exponent: num(e, "exponent")?,
        }),
        ["stub", "constant", v] => AlgChoice::Stub(StubCurve::Constant {
            value: num(v, "value")?,
        }),
        ["stub", "step", b, a, at] => AlgChoice::Stub(StubCurve::Step {
            before: num(b, "loss")?,
            after: num(a, "loss")?,
            switch_at: num(at, "size")?,
        }),
        _ => bail!("unknown algorithm {text:?}"),
    };
    Ok(match choice {
        AlgChoice::Learner(LearningAlgorithm::Probe(mut spec)) => {
            if let Some(w) = o.width {
                spec.hidden_width = w;
            }
            if let Some(lr) = o.learning_rate {
                spec.learning_rate = lr;
            }
            if let Some(s) = o.steps {
                spec.steps = s;
            }
            if let Some(b) = o.batch_size {
                spec.batch_size = b;
            }
            spec.validate()?;
            AlgChoice::Learner(LearningAlgorithm::Probe(spec))
        }
        other => other,
    })
}

/// `log:MIN:MAX:COUNT`, `list:A,B,...` or a bare comma-separated list.
pub fn parse_sizes(text: &str) -> anyhow::Result<Vec<usize>> {
    if let Some(rest) = text.strip_prefix("log:") {
        let p: Vec<&str> = rest.split(':').collect();
        let [lo, hi, count] = p.as_slice() else {
            bail!("expected log:MIN:MAX:COUNT, got {text:?}");
        };
        return Ok(make_grid(
            num(lo, "size")?,
            num(hi, "size")?,
            num(count, "count")?,
        )?);
    }
    let list = text.strip_prefix("list:").unwrap_or(text);
    list.split(',')
        .map(|s| num(s.trim(), "size"))
        .collect::<anyhow::Result<Vec<usize>>>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algorithms() {
        let o = ProbeOverrides {
            width: Some(64),
            ..Default::default()
        };
        match parse_alg("probe:mlp2", o).unwrap() {
            AlgChoice::Learner(LearningAlgorithm::Probe(s)) => assert_eq!(s.hidden_width, 64),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            parse_alg("gf2", o).unwrap(),
            AlgChoice::Learner(LearningAlgorithm::Gf2Parity)
        );
        assert_eq!(
            parse_alg("stub:step:0.5:0:5", o).unwrap(),
            AlgChoice::Stub(StubCurve::Step {
                before: 0.5,
                after: 0.0,
                switch_at: 5
            })
        );
        assert!(parse_alg("svm", o).is_err());
        assert!(parse_alg("stub:inverse:x", o).is_err());
    }

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("log:10:50000:20").unwrap().len(), 20);
        assert_eq!(parse_sizes("list:1,10,100").unwrap(), vec![1, 10, 100]);
        assert_eq!(parse_sizes("8, 64").unwrap(), vec![8, 64]);
        assert!(parse_sizes("log:10:5").is_err());
    }
}
