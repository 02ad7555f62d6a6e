use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxisKind {
    ThroughElement,
    BetweenElements,
}

/// One end of a symmetry axis of a cyclic word. For `ThroughElement` the
/// axis passes through the element at `position` (0-based); for
/// `BetweenElements` it passes between `position` and `position + 1`
/// (cyclically).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisEnd {
    pub kind: AxisKind,
    #[serde(with = "crate::json::int_str")]
    pub position: usize,
}

/// The reflection `k ↦ shift - k (mod t)` and where its axis crosses the cycle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Axis {
    #[serde(with = "crate::json::int_str")]
    pub shift: usize,
    pub ends: [AxisEnd; 2],
}

impl Axis {
    pub fn has_element_end(&self) -> bool {
        self.ends.iter().any(|e| e.kind == AxisKind::ThroughElement)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PalindromeAxes {
    pub is_palindrome: bool,
    pub axes: Vec<Axis>,
}

impl PalindromeAxes {
    pub fn has_element_axis(&self) -> bool {
        self.axes.iter().any(Axis::has_element_end)
    }
}

fn axis_for(shift: usize, t: usize) -> Axis {
    // fixed points of k ↦ shift - k are the solutions of 2k ≡ shift (mod t)
    let fixed: Vec<usize> = (0..t).filter(|&k| (2 * k) % t == shift % t).collect();
    let through = |position| AxisEnd { kind: AxisKind::ThroughElement, position };
    let between = |position| AxisEnd { kind: AxisKind::BetweenElements, position };
    let ends = match fixed.len() {
        2 => [through(fixed[0]), through(fixed[1])],
        1 => {
            let k = fixed[0];
            // the opposite end falls between the two elements facing k
            let opposite = (k + t / 2) % t;
            [through(k), between(opposite)]
        }
        _ => {
            // shift odd, t even: between (shift-1)/2 and (shift+1)/2, and opposite
            let p = (shift - 1) / 2;
            let mut e = [between(p), between((p + t / 2) % t)];
            e.sort_by_key(|x| x.position);
            e
        }
    };
    Axis { shift, ends }
}

/// All reflections of the cyclic word `seq` that map it to itself.
pub fn is_cyclic_palindrome<T: PartialEq>(seq: &[T]) -> PalindromeAxes {
    let t = seq.len();
    let axes: Vec<Axis> = (0..t)
        .filter(|&s| (0..t).all(|k| seq[k] == seq[(s + t - k) % t]))
        .map(|s| axis_for(s, t))
        .collect();
    PalindromeAxes { is_palindrome: !axes.is_empty(), axes }
}
