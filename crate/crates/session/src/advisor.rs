use std::collections::BTreeSet;

use automata_core::LetterId;
use oracle::Advisor;

use crate::Session;

/// Answers prefix queries by replaying a fresh session, so table-based
/// consultants can be checked with the same tools as the oracle.
pub struct TableAdvisor {
    session: Session,
}

impl TableAdvisor {
    pub fn new(session: &Session) -> Self {
        let mut session = session.clone();
        session.reset();
        TableAdvisor { session }
    }

    fn replay(&self, u: &[LetterId]) -> Option<Session> {
        let mut s = self.session.clone();
        for &l in u {
            s.step_letter(Some(l)).ok()?;
        }
        Some(s)
    }
}

impl Advisor for TableAdvisor {
    fn any_set(&self, u: &[LetterId]) -> BTreeSet<LetterId> {
        self.replay(u).and_then(|s| s.recommend().any).unwrap_or_default()
    }

    fn cyclic_set(&self, u: &[LetterId]) -> BTreeSet<LetterId> {
        self.replay(u).and_then(|s| s.recommend().cyclic).unwrap_or_default()
    }
}
