use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use reqwest::blocking::Client;
use reqwest::{StatusCode, Url};
use thiserror::Error;

use crate::config::FetchConfig;
use crate::{Origin, PageSource};

#[derive(Debug, Error)]
pub enum FetchError {
    #[error("page '{0}' does not exist")]
    NotFound(String),
    #[error("fetching '{title}' failed after {attempts} attempt(s): {message}")]
    Failed {
        title: String,
        attempts: u32,
        message: String,
        retriable: bool,
    },
    #[error("invalid endpoint '{0}'")]
    Endpoint(String),
}

impl FetchError {
    /// True when trying again later might succeed.
    pub fn retriable(&self) -> bool {
        matches!(self, FetchError::Failed { retriable: true, .. })
    }
}

/// Spaces request starts at least `interval` apart.
#[derive(Debug)]
pub struct RateLimiter {
    interval: Duration,
    last: Mutex<Option<Instant>>,
}

impl RateLimiter {
    pub fn new(interval: Duration) -> Self {
        RateLimiter {
            interval,
            last: Mutex::new(None),
        }
    }

    /// Blocks until the next request may start and returns its start time.
    pub fn acquire(&self) -> Instant {
        let mut last = self.last.lock().unwrap();
        if let Some(prev) = *last {
            let ready = prev + self.interval;
            let now = Instant::now();
            if ready > now {
                thread::sleep(ready - now);
            }
        }
        let now = Instant::now();
        *last = Some(now);
        now
    }
}

type Hook = Box<dyn Fn(&str, Instant) + Send + Sync>;

/// Client for the wiki's raw-wikitext interface.
pub struct Fetcher {
    client: Client,
    config: FetchConfig,
    limiter: RateLimiter,
    on_request: Option<Hook>,
}

enum Attempt {
    Done(String),
    Missing,
    Retry(String),
    Fatal(String),
}

impl Fetcher {
    pub fn new(config: FetchConfig) -> Result<Self, FetchError> {
        Url::parse(&config.endpoint).map_err(|_| FetchError::Endpoint(config.endpoint.clone()))?;
        let client = Client::builder()
            .user_agent(config.user_agent.clone())
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .map_err(|e| FetchError::Endpoint(e.to_string()))?;
        Ok(Fetcher {
            client,
            limiter: RateLimiter::new(config.interval()),
            config,
            on_request: None,
        })
    }

    /// Registers a callback invoked with the title and start time of every
    /// HTTP request, retries included.
    pub fn on_request(mut self, hook: impl Fn(&str, Instant) + Send + Sync + 'static) -> Self {
        self.on_request = Some(Box::new(hook));
        self
    }

    pub fn raw_url(&self, title: &str) -> Result<Url, FetchError> {
        let base = self.config.endpoint.trim_end_matches('/');
        Url::parse_with_params(
            &format!("{base}/w/index.php"),
            [("title", title), ("action", "raw")],
        )
        .map_err(|_| FetchError::Endpoint(self.config.endpoint.clone()))
    }

    pub fn fetch_page(&self, title: &str) -> Result<PageSource, FetchError> {
        let title = title.trim();
        let url = self.raw_url(title)?;
        let attempts = self.config.retries + 1;
        let mut last_error = String::new();
        for attempt in 1..=attempts {
            if attempt > 1 {
                thread::sleep(Duration::from_millis(self.config.retry_delay_ms * u64::from(attempt - 1)));
            }
            let started = self.limiter.acquire();
            if let Some(hook) = &self.on_request {
                hook(title, started);
            }
            match self.attempt(url.clone()) {
                Attempt::Done(text) => {
                    return Ok(PageSource {
                        title: title.to_string(),
                        text,
                        origin: Origin::Remote,
                    })
                }
                Attempt::Missing => return Err(FetchError::NotFound(title.to_string())),
                Attempt::Retry(message) => {
                    log::warn!("{title}: attempt {attempt}/{attempts}: {message}");
                    last_error = message;
                }
                Attempt::Fatal(message) => {
                    return Err(FetchError::Failed {
                        title: title.to_string(),
                        attempts: attempt,
                        message,
                        retriable: false,
                    })
                }
            }
        }
        Err(FetchError::Failed {
            title: title.to_string(),
            attempts,
            message: last_error,
            retriable: true,
        })
    }

    fn attempt(&self, url: Url) -> Attempt {
        let response = match self.client.get(url).send() {
            Ok(r) => r,
            Err(e) => return Attempt::Retry(e.to_string()),
        };
        let status = response.status();
        if status == StatusCode::NOT_FOUND {
            return Attempt::Missing;
        }
        if status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS {
            return Attempt::Retry(format!("HTTP {status}"));
        }
        if !status.is_success() {
            return Attempt::Fatal(format!("HTTP {status}"));
        }
        match response.text() {
            Ok(text) => Attempt::Done(text),
            Err(e) => Attempt::Retry(e.to_string()),
        }
    }
}
