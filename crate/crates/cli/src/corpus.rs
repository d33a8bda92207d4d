//! The bundled list-manipulation tasks.

use crate::task::{parse_examples, TaskBundle, TaskError};
use lff_core::eval::ExampleSet;

pub struct CorpusTask {
    pub name: &'static str,
    pub bias: &'static str,
    pub bk: &'static str,
    pub exs: &'static str,
    /// Held-out examples.
    pub test: &'static str,
}

macro_rules! task {
    ($name:literal) => {
        CorpusTask {
            name: $name,
            bias: include_str!(concat!("../corpus/", $name, "/bias.pl")),
            bk: include_str!(concat!("../corpus/", $name, "/bk.pl")),
            exs: include_str!(concat!("../corpus/", $name, "/exs.pl")),
            test: include_str!(concat!("../corpus/", $name, "/test.pl")),
        }
    };
}

pub const TASKS: [CorpusTask; 10] = [
    task!("contains"),
    task!("dropk"),
    task!("droplast"),
    task!("evens"),
    task!("finddup"),
    task!("last"),
    task!("len"),
    task!("reverse-lite"),
    task!("sorted"),
    task!("sumlist"),
];

pub fn find(name: &str) -> Option<&'static CorpusTask> {
    TASKS.iter().find(|t| t.name == name)
}

impl CorpusTask {
    pub fn bundle(&self) -> Result<TaskBundle, TaskError> {
        TaskBundle::parse(self.name, self.bias, self.bk, self.exs)
    }

    pub fn held_out(&self) -> Result<ExampleSet, TaskError> {
        parse_examples(self.test)
    }
}
