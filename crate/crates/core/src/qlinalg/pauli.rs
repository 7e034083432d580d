use super::{mat::CMat, DensityMatrix, C_ONE, C_ZERO};
use crate::circuits::{Gate, GateKind};
use crate::{Error, Result, TOL_ALGEBRA};
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::OnceLock;

/// Single-qubit Pauli letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> CMat {
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => CMat::identity(2),
            Pauli::X => CMat::from_rows(&[&[C_ZERO, C_ONE], &[C_ONE, C_ZERO]]),
            Pauli::Y => CMat::from_rows(&[&[C_ZERO, -i], &[i, C_ZERO]]),
            Pauli::Z => CMat::from_rows(&[&[C_ONE, C_ZERO], &[C_ZERO, -C_ONE]]),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Pauli> {
        match c {
            'I' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            _ => Err(Error::Invalid(format!("pauli letter {c}"))),
        }
    }

    fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    fn from_index(i: usize) -> Pauli {
        Pauli::ALL[i]
    }

    /// Column action: P |b> = phase(b) |target(b)>.
    #[inline]
    pub fn column_action(self, b: usize) -> (usize, Complex64) {
        match self {
            Pauli::I => (b, C_ONE),
            Pauli::X => (1 - b, C_ONE),
            Pauli::Y => (1 - b, if b == 0 { Complex64::new(0.0, 1.0) } else { Complex64::new(0.0, -1.0) }),
            Pauli::Z => (b, if b == 0 { C_ONE } else { -C_ONE }),
        }
    }
}

/// Power of i: Phase(k) represents i^k for k in 0..4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn value(self) -> Complex64 {
        match self.0 & 3 {
            0 => C_ONE,
            1 => Complex64::new(0.0, 1.0),
            2 => -C_ONE,
            _ => Complex64::new(0.0, -1.0),
        }
    }

    pub fn times(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) & 3)
    }

    pub fn from_value(c: Complex64) -> Result<Phase> {
        for k in 0..4u8 {
            if (Phase(k).value() - c).norm() < 1e-9 {
                return Ok(Phase(k));
            }
        }
        Err(Error::Invalid(format!("{c} is not a power of i")))
    }
}

/// Signed tensor of Pauli letters on a fixed register.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    letters: Vec<Pauli>,
    phase: Phase,
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        Self { num_qubits, letters: vec![Pauli::I; num_qubits], phase: Phase::ONE }
    }

    pub fn new(num_qubits: usize, letters: Vec<Pauli>, phase: Phase) -> Result<Self> {
        if letters.len() != num_qubits {
            return Err(Error::DimensionMismatch("pauli string length".into()));
        }
        Ok(Self { num_qubits, letters, phase })
    }

    /// Single-letter string: `letter` on `qubit`, identity elsewhere.
    pub fn single(num_qubits: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        if qubit >= num_qubits {
            return Err(Error::QubitOutOfRange { index: qubit, num_qubits });
        }
        let mut letters = vec![Pauli::I; num_qubits];
        letters[qubit] = letter;
        Ok(Self { num_qubits, letters, phase: Phase::ONE })
    }

    /// Parses e.g. "XIZ" (qubit 0 first). A leading '-' negates.
    pub fn parse(s: &str) -> Result<Self> {
        let (phase, body) = match s.strip_prefix('-') {
            Some(rest) => (Phase::MINUS_ONE, rest),
            None => (Phase::ONE, s),
        };
        let letters: Result<Vec<Pauli>> = body.chars().map(Pauli::from_char).collect();
        let letters = letters?;
        let n = letters.len();
        Self::new(n, letters, phase)
    }

    #[inline]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters[qubit]
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits).filter(|&q| self.letters[q] != Pauli::I).collect()
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|&&p| p != Pauli::I).count()
    }

    /// Group product self * other with phase tracking.
    pub fn compose(&self, other: &PauliString) -> Result<PauliString> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch("pauli composition".into()));
        }
        let mut phase = self.phase.times(other.phase);
        let mut letters = Vec::with_capacity(self.num_qubits);
        for q in 0..self.num_qubits {
            let (letter, extra) = mul_letters(self.letters[q], other.letters[q]);
            letters.push(letter);
            phase = phase.times(extra);
        }
        Ok(PauliString { num_qubits: self.num_qubits, letters, phase })
    }

    pub fn commutes_with(&self, other: &PauliString) -> Result<bool> {
        let ab = self.compose(other)?;
        let ba = other.compose(self)?;
        Ok(ab.phase == ba.phase)
    }

    /// Dense matrix (small registers only).
    pub fn to_matrix(&self) -> Result<CMat> {
        if self.num_qubits > 13 {
            return Err(Error::SizeLimit { requested: self.num_qubits, limit: 13 });
        }
        let dim = 1usize << self.num_qubits;
        let mut m = CMat::zeros(dim);
        for col in 0..dim {
            let (row, ph) = self.column_action(col);
            m[(row, col)] += ph;
        }
        Ok(m)
    }

    /// P |col> = phase * |row>, computed bitwise.
    pub fn column_action(&self, col: usize) -> (usize, Complex64) {
        let n = self.num_qubits;
        let mut row = 0usize;
        let mut phase = self.phase.value();
        for q in 0..n {
            let b = (col >> (n - 1 - q)) & 1;
            let (nb, ph) = self.letters[q].column_action(b);
            row |= nb << (n - 1 - q);
            phase *= ph;
        }
        (row, phase)
    }

    /// trace(rho * P) without materializing P.
    pub fn trace_with(&self, rho: &DensityMatrix) -> Result<Complex64> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch("pauli trace".into()));
        }
        let dim = rho.dim();
        let mut acc = C_ZERO;
        for col in 0..dim {
            let (row, ph) = self.column_action(col);
            acc += ph * rho.mat()[(col, row)];
        }
        Ok(acc)
    }

    /// Restriction to a subset of qubits (ascending), carrying the phase.
    /// Errors if the string acts outside the subset.
    pub fn restrict(&self, keep: &[usize]) -> Result<PauliString> {
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        for q in 0..self.num_qubits {
            if self.letters[q] != Pauli::I && !sorted.contains(&q) {
                return Err(Error::Invalid(format!("support qubit {q} outside restriction")));
            }
        }
        let letters: Vec<Pauli> = sorted
            .iter()
            .map(|&q| if q < self.num_qubits { self.letters[q] } else { Pauli::I })
            .collect();
        let n = letters.len();
        PauliString::new(n, letters, self.phase)
    }

    /// The same string on a wider register, placing qubit i at embedding[i].
    pub fn embed(&self, num_qubits: usize, embedding: &[usize]) -> Result<PauliString> {
        if embedding.len() != self.num_qubits {
            return Err(Error::DimensionMismatch("pauli embedding".into()));
        }
        let mut letters = vec![Pauli::I; num_qubits];
        for (i, &q) in embedding.iter().enumerate() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { index: q, num_qubits });
            }
            letters[q] = self.letters[i];
        }
        PauliString::new(num_qubits, letters, self.phase)
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prefix = match self.phase.0 & 3 {
            0 => "",
            1 => "i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}")?;
        for l in &self.letters {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

fn mul_letters(a: Pauli, b: Pauli) -> (Pauli, Phase) {
    use Pauli::*;
    match (a, b) {
        (I, p) => (p, Phase::ONE),
        (p, I) => (p, Phase::ONE),
        (X, X) | (Y, Y) | (Z, Z) => (I, Phase::ONE),
        (X, Y) => (Z, Phase::I),
        (Y, X) => (Z, Phase::MINUS_I),
        (Y, Z) => (X, Phase::I),
        (Z, Y) => (X, Phase::MINUS_I),
        (Z, X) => (Y, Phase::I),
        (X, Z) => (Y, Phase::MINUS_I),
    }
}

/// Pauli coefficients of a Hermitian matrix on k qubits:
/// `rho = sum_P coeff(P) P` with `coeff(P) = trace(rho P) / 2^k`.
///
/// Returns the 4^k coefficients keyed by letter tuples in lexicographic
/// (I, X, Y, Z) order per qubit.
pub fn pauli_decompose(rho: &DensityMatrix, max_qubits: usize) -> Result<Vec<(PauliString, f64)>> {
    let k = rho.num_qubits();
    if k > max_qubits {
        return Err(Error::SizeLimit { requested: k, limit: max_qubits });
    }
    let defect = rho.mat().hermiticity_defect();
    if defect > TOL_ALGEBRA {
        return Err(Error::NotHermitian(defect));
    }
    let count = 1usize << (2 * k);
    let scale = 1.0 / (1usize << k) as f64;
    let mut out = Vec::with_capacity(count);
    for code in 0..count {
        let letters: Vec<Pauli> = (0..k)
            .map(|q| Pauli::from_index((code >> (2 * (k - 1 - q))) & 3))
            .collect();
        let ps = PauliString::new(k, letters, Phase::ONE)?;
        let coeff = ps.trace_with(rho)?;
        out.push((ps, coeff.re * scale));
    }
    Ok(out)
}

/// Reconstructs a matrix from Pauli coefficients (inverse of decomposition).
pub fn pauli_reconstruct(terms: &[(PauliString, f64)]) -> Result<CMat> {
    let k = terms
        .first()
        .map(|(p, _)| p.num_qubits())
        .ok_or_else(|| Error::Invalid("empty pauli term list".into()))?;
    let dim = 1usize << k;
    let mut m = CMat::zeros(dim);
    for (p, c) in terms {
        if *c == 0.0 {
            continue;
        }
        for col in 0..dim {
            let (row, ph) = p.column_action(col);
            m[(row, col)] += ph * *c;
        }
    }
    Ok(m)
}

/// Conjugation table for one Clifford gate kind, built by brute force:
/// maps input letters on the gate's support to (output letters, phase).
struct ConjTable {
    arity: usize,
    /// Indexed by packed input letters; value is (packed output, phase).
    map: Vec<(usize, Phase)>,
}

fn conj_table(kind: GateKind) -> Result<&'static ConjTable> {
    static TABLES: OnceLock<HashMap<GateKind, Option<ConjTable>>> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        let mut m = HashMap::new();
        for kind in [
            GateKind::X,
            GateKind::Z,
            GateKind::P,
            GateKind::Pdag,
            GateKind::H,
            GateKind::Cnot,
            GateKind::Cp,
            GateKind::T,
            GateKind::Tdag,
        ] {
            m.insert(kind, build_conj_table(kind));
        }
        m
    });
    match tables.get(&kind) {
        Some(Some(t)) => Ok(t),
        _ => Err(Error::NonClifford(kind.name().into())),
    }
}

/// Tries to express U^dagger P U as a signed Pauli for every P on the gate's
/// support; None when the gate is not Clifford.
fn build_conj_table(kind: GateKind) -> Option<ConjTable> {
    let arity = kind.arity();
    let u = kind.matrix();
    let udag = u.dagger();
    let count = 1usize << (2 * arity);
    let mut map = Vec::with_capacity(count);
    for code in 0..count {
        let letters: Vec<Pauli> = (0..arity)
            .map(|q| Pauli::from_index((code >> (2 * (arity - 1 - q))) & 3))
            .collect();
        let p = PauliString::new(arity, letters, Phase::ONE).ok()?;
        let conj = udag.mul(&p.to_matrix().ok()?).mul(&u);
        let mut found = None;
        'search: for out_code in 0..count {
            let out_letters: Vec<Pauli> = (0..arity)
                .map(|q| Pauli::from_index((out_code >> (2 * (arity - 1 - q))) & 3))
                .collect();
            let q = PauliString::new(arity, out_letters, Phase::ONE).ok()?;
            let qm = q.to_matrix().ok()?;
            for ph in [Phase::ONE, Phase::I, Phase::MINUS_ONE, Phase::MINUS_I] {
                if conj.max_abs_diff(&qm.scale(ph.value())) < 1e-9 {
                    found = Some((out_code, ph));
                    break 'search;
                }
            }
        }
        map.push(found?);
    }
    Some(ConjTable { arity, map })
}

/// Back-propagates a Pauli string through a Clifford prefix: returns the
/// unique signed Pauli P' with `P (U_t ... U_1) = (U_t ... U_1) P'`.
pub fn pauli_backpropagate(p: &PauliString, prefix: &[Gate]) -> Result<PauliString> {
    let mut current = p.clone();
    for gate in prefix.iter().rev() {
        let table = conj_table(gate.kind)?;
        debug_assert_eq!(table.arity, gate.targets.len());
        // Pack the letters on the gate's targets.
        let mut code = 0usize;
        for (i, &t) in gate.targets.iter().enumerate() {
            if t >= current.num_qubits {
                return Err(Error::QubitOutOfRange { index: t, num_qubits: current.num_qubits });
            }
            code |= current.letters[t].index() << (2 * (table.arity - 1 - i));
        }
        let (out_code, extra) = table.map[code];
        let mut letters = current.letters.clone();
        for (i, &t) in gate.targets.iter().enumerate() {
            letters[t] = Pauli::from_index((out_code >> (2 * (table.arity - 1 - i))) & 3);
        }
        current = PauliString {
            num_qubits: current.num_qubits,
            letters,
            phase: current.phase.times(extra),
        };
    }
    Ok(current)
}
