use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use wikiparadigm::config::FetchConfig;
use wikiparadigm::fetch::Fetcher;
use wikiparadigm::{ingest_paths, run_batch, BatchOptions, PageSource};
use wikiparadigm_core::dictionary::{export_dictionary, import_dictionary, Format, StoreDir};
use wikiparadigm_core::morphology::{load_rule_table, render_rules_document};
use wikiparadigm_core::wikitext::extract_templates;
use wikiparadigm_core::{RuleSet, Store};
use wikiparadigm_service::{preview, router, AppState};

#[derive(Parser)]
#[command(name = "wikiparadigm", version, about = "Expand a Veps/Karelian dictionary from Wiktionary inflection templates")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Dictionary store directory.
    #[arg(long, global = true, env = "WIKIPARADIGM_STORE", default_value = "wikiparadigm-store")]
    store: PathBuf,
    /// Directory of *.rules files overriding the shipped rule tables.
    #[arg(long, global = true)]
    rules: Option<PathBuf>,
    /// TOML file with endpoint, rate_limit, retries, user_agent.
    #[arg(long, global = true, env = "WIKIPARADIGM_CONFIG")]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the template invocations of a page file or wiki title as JSON lines.
    Parse { source: String },
    /// Print the paradigm generated from a pasted template invocation.
    Preview { template: String },
    /// Rule table utilities.
    Rules {
        #[command(subcommand)]
        command: RulesCommand,
    },
    /// Generate and merge paradigms for many pages.
    Batch {
        /// File with one page title per line, fetched from the wiki.
        #[arg(long, conflicts_with = "dir", required_unless_present = "dir")]
        titles: Option<PathBuf>,
        /// Directory of page sources (title = file name without extension).
        #[arg(long)]
        dir: Option<PathBuf>,
        /// Store generated forms as accepted instead of pending.
        #[arg(long)]
        auto_accept: bool,
    },
    /// Write the dictionary to stdout or a file.
    Export {
        #[arg(long, default_value = "tsv")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Add a TSV or structured dictionary file to the store.
    Import {
        file: PathBuf,
        #[arg(long, default_value = "tsv")]
        format: Format,
    },
    /// List duplicate entries and forms; remove them with --apply.
    Dedupe {
        #[arg(long)]
        apply: bool,
    },
    /// Run the review API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        bind: SocketAddr,
        /// Static files of the review UI, served at /.
        #[arg(long)]
        ui_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RulesCommand {
    /// Describe a rule file in prose for linguists.
    Render { file: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

type Result<T> = std::result::Result<T, String>;

fn rules(global: &Global) -> Result<RuleSet> {
    match &global.rules {
        Some(dir) => RuleSet::with_overrides(dir).map_err(|e| e.to_string()),
        None => Ok(RuleSet::shipped()),
    }
}

fn open_store(global: &Global) -> Result<(StoreDir, Store)> {
    StoreDir::open(&global.store).map_err(|e| e.to_string())
}

fn save(dir: &StoreDir, store: &Store, op: &str, detail: serde_json::Value) -> Result<()> {
    dir.save(store).map_err(|e| e.to_string())?;
    dir.log(op, detail).map_err(|e| e.to_string())
}

fn fetcher(global: &Global) -> Result<Fetcher> {
    let config = FetchConfig::load(global.config.as_deref()).map_err(|e| e.to_string())?;
    Fetcher::new(config).map_err(|e| e.to_string())
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match cli.command {
        Command::Parse { source } => {
            let page = if Path::new(&source).is_file() {
                let (mut pages, warnings) = ingest_paths(&[&source]);
                if pages.is_empty() {
                    return Err(warnings.join("; "));
                }
                pages.remove(0)
            } else {
                fetcher(g)?.fetch_page(&source).map_err(|e| e.to_string())?
            };
            let extraction = extract_templates(&page.text);
            for w in &extraction.warnings {
                eprintln!("warning: {w}");
            }
            for inv in &extraction.invocations {
                println!("{}", serde_json::to_string(inv).expect("serializable"));
            }
        }
        Command::Preview { template } => {
            let p = preview(&rules(g)?, &template).map_err(|e| e.message)?;
            for w in &p.warnings {
                eprintln!("warning: {w}");
            }
            let c = p.paradigm.counts();
            println!("{} ({})", p.lemma, p.kind.template_name());
            print!("{}", p.paradigm.render_table());
            println!(
                "{} slots: {} forms, {} unknown, {} nonexistent",
                p.paradigm.slots.len(),
                c.surface,
                c.unknown,
                c.nonexistent
            );
        }
        Command::Rules {
            command: RulesCommand::Render { file },
        } => {
            let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let table = load_rule_table(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            print!("{}", render_rules_document(&table));
        }
        Command::Batch {
            titles,
            dir,
            auto_accept,
        } => {
            let rules = rules(g)?;
            let (pages, mut warnings): (Vec<PageSource>, Vec<String>) = match (titles, dir) {
                (Some(file), _) => {
                    let list = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
                    let fetcher = fetcher(g)?;
                    let mut pages = Vec::new();
                    let mut warnings = Vec::new();
                    for title in list.lines().map(str::trim).filter(|t| !t.is_empty() && !t.starts_with('#')) {
                        match fetcher.fetch_page(title) {
                            Ok(p) => pages.push(p),
                            Err(e) => warnings.push(e.to_string()),
                        }
                    }
                    (pages, warnings)
                }
                (None, Some(dir)) => {
                    if !dir.is_dir() {
                        return Err(format!("{}: not a directory", dir.display()));
                    }
                    ingest_paths(&[dir])
                }
                (None, None) => unreachable!("clap requires --titles or --dir"),
            };
            let (store_dir, mut store) = open_store(g)?;
            let mut report = run_batch(&pages, &mut store, &rules, BatchOptions { auto_accept });
            warnings.append(&mut report.warnings);
            report.warnings = warnings;
            save(&store_dir, &store, "batch", serde_json::to_value(&report).unwrap())?;
            for w in &report.warnings {
                log::warn!("{w}");
            }
            print_json(&report);
        }
        Command::Export { format, output } => {
            let (_dir, mut store) = open_store(g)?;
            store.set_slot_orders(rules(g)?.slot_orders());
            let bytes = export_dictionary(&store, format);
            match output {
                Some(path) => std::fs::write(&path, bytes).map_err(|e| format!("{}: {e}", path.display()))?,
                None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string())?,
            }
        }
        Command::Import { file, format } => {
            let bytes = std::fs::read(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let incoming = import_dictionary(&bytes, format).map_err(|e| format!("{}: {e}", file.display()))?;
            let (dir, mut store) = open_store(g)?;
            let entries = incoming.entries().len();
            let forms: usize = incoming.entries().iter().map(|e| e.forms.len()).sum();
            store.absorb(incoming);
            save(&dir, &store, "import", serde_json::json!({ "file": file, "entries": entries, "forms": forms }))?;
            println!("imported {entries} entries with {forms} forms");
        }
        Command::Dedupe { apply } => {
            let (dir, mut store) = open_store(g)?;
            let groups = store.find_duplicates();
            print_json(&groups);
            if apply {
                let report = store.remove_duplicates();
                save(&dir, &store, "dedupe", serde_json::to_value(report).unwrap())?;
                print_json(&report);
            }
        }
        Command::Serve { bind, ui_dir } => {
            let rules = rules(g)?;
            let (dir, store) = open_store(g)?;
            serve(AppState::new(store, rules, Some(dir)), bind, ui_dir)?;
        }
    }
    Ok(())
}

fn serve(state: AppState, bind: SocketAddr, ui_dir: Option<PathBuf>) -> Result<()> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| e.to_string())?;
    runtime.block_on(async move {
        let state = Arc::new(state);
        let mut app = router(state.clone());
        if let Some(ui) = ui_dir {
            app = app.fallback_service(tower_http::services::ServeDir::new(ui));
        }
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .map_err(|e| format!("cannot bind {bind}: {e}"))?;
        eprintln!("listening on http://{}", listener.local_addr().map_err(|e| e.to_string())?);
        axum::serve(listener, app)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
            .map_err(|e| e.to_string())?;
        state.flush().await
    })
}
