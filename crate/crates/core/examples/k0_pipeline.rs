//! The end-to-end certification, and what a corrupted input does to it.

use hfkcert::weird::{run_k0_pipeline, Mutation, PipelineOptions};

fn main() {
    let report = run_k0_pipeline(&PipelineOptions::default()).unwrap();
    print!("{}", report.render_text());
    for m in Mutation::ALL {
        let r = run_k0_pipeline(&PipelineOptions { mutation: Some(m), ..Default::default() }).unwrap();
        println!("{:<24} {} at {}", m.name(), r.overall.label(), r.failed_stage.as_deref().unwrap_or("-"));
    }
}
