use crate::defcomplex::perm::increasing_tuples;
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::report::Check;

use super::SplitVB;

impl SplitVB {
    fn core_count(&self, idx: &[usize]) -> usize {
        idx.iter().filter(|&&i| self.is_core_generator(i)).count()
    }

    /// Linear iff `[[Δ_E, c]] = 0` for the Euler derivation `Δ_E`.
    pub fn classify_cochain_linearity(&self, c: &DefCochain) -> Result<Check> {
        self.check_parent(c)?;
        let b = c.bracket_with_derivation(&self.euler_derivation())?;
        let names = self.total.frame_names();
        if let Some((idx, s)) = b.values().iter().next() {
            return Ok(Check::fail(
                "linear",
                self.total.tuple_name(idx),
                s.display(names).to_string(),
            ));
        }
        if let Some((idx, x)) = b.symbols().iter().next() {
            return Ok(Check::fail(
                "linear",
                format!("symbol {}", self.total.tuple_name(idx)),
                x.to_string(),
            ));
        }
        Ok(Check::pass("linear"))
    }

    /// Linearity by reading the frame table: values on linear generators
    /// are linear sections, together with the clauses of
    /// [`SplitVB::corollary_c_check`].
    pub fn inspect_linearity(&self, c: &DefCochain) -> Result<Check> {
        self.check_parent(c)?;
        let names = self.total.frame_names();
        let tuples = increasing_tuples(self.total.rank(), c.degree());
        let all_linear = tuples.into_iter().filter(|idx| self.core_count(idx) == 0);
        let values = Check::first_failure("linear_inspection", all_linear, |idx| {
            let s = c.value_on_frame(&idx);
            (!self.is_linear_section(&s)).then(|| (self.total.tuple_name(&idx), s.display(names).to_string()))
        });
        if !values.passed() || c.degree() == 0 {
            return Ok(values);
        }
        for check in self.corollary_c_check(c)? {
            if let Some(w) = check.witness {
                return Ok(Check::fail(
                    "linear_inspection",
                    format!("{} {}", check.name, w.location),
                    w.residual,
                ));
            }
        }
        Ok(Check::pass("linear_inspection"))
    }

    /// The shape clauses satisfied by a linear cochain of positive degree:
    /// one core slot gives a core value and a vertical-lift symbol, two or
    /// more give zero, and all-linear symbols are linear vector fields.
    pub fn corollary_c_check(&self, c: &DefCochain) -> Result<Vec<Check>> {
        self.check_parent(c)?;
        let k = c.degree();
        if k == 0 {
            return Err(Error::Shape("the clauses concern cochains of degree at least 1".into()));
        }
        let size = self.total.rank();
        let names = self.total.frame_names();
        let t = &self.total;
        let values = increasing_tuples(size, k);
        let symbols = increasing_tuples(size, k - 1);
        let with_cores = |ts: &[Vec<usize>], pick: fn(usize) -> bool| -> Vec<Vec<usize>> {
            ts.iter().filter(|idx| pick(self.core_count(idx))).cloned().collect()
        };
        let core_value = Check::first_failure("core_value", with_cores(&values, |n| n == 1), |idx| {
            let s = c.value_on_frame(&idx);
            (!self.is_core_section(&s)).then(|| (t.tuple_name(&idx), s.display(names).to_string()))
        });
        let multi_core_value = Check::first_failure("multi_core_value", with_cores(&values, |n| n >= 2), |idx| {
            let s = c.value_on_frame(&idx);
            (!s.is_zero()).then(|| (t.tuple_name(&idx), s.display(names).to_string()))
        });
        let linear_symbol = Check::first_failure("linear_symbol", with_cores(&symbols, |n| n == 0), |idx| {
            let x = c.symbol_on_frame(&idx);
            (!self.is_linear_vector_field(&x)).then(|| (t.tuple_name(&idx), x.to_string()))
        });
        let core_symbol = Check::first_failure("core_symbol", with_cores(&symbols, |n| n == 1), |idx| {
            let x = c.symbol_on_frame(&idx);
            (!self.is_vertical_lift(&x)).then(|| (t.tuple_name(&idx), x.to_string()))
        });
        let multi_core_symbol = Check::first_failure("multi_core_symbol", with_cores(&symbols, |n| n >= 2), |idx| {
            let x = c.symbol_on_frame(&idx);
            (!x.is_zero()).then(|| (t.tuple_name(&idx), x.to_string()))
        });
        Ok(vec![
            core_value,
            multi_core_value,
            linear_symbol,
            core_symbol,
            multi_core_symbol,
        ])
    }
}
