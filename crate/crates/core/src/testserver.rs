//! In-process HTTP fixture server. Serves canned responses over a loopback
//! socket so the whole pipeline (fetch, archive, lookup) can run hermetically
//! in tests and recorded-run replays. Request paths and times are logged for
//! politeness assertions.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct CannedResponse {
    pub status: u16,
    pub content_type: String,
    pub body: Vec<u8>,
    pub location: Option<String>,
}

impl CannedResponse {
    pub fn html(body: &str) -> Self {
        Self { status: 200, content_type: "text/html; charset=utf-8".into(), body: body.as_bytes().to_vec(), location: None }
    }

    pub fn bytes(content_type: &str, body: Vec<u8>) -> Self {
        Self { status: 200, content_type: content_type.into(), body, location: None }
    }

    pub fn json(body: &str) -> Self {
        Self { status: 200, content_type: "application/json".into(), body: body.as_bytes().to_vec(), location: None }
    }

    pub fn status(status: u16) -> Self {
        Self { status, content_type: "text/plain".into(), body: Vec::new(), location: None }
    }

    pub fn redirect(status: u16, location: &str) -> Self {
        Self { status, content_type: "text/plain".into(), body: Vec::new(), location: Some(location.into()) }
    }
}

/// One logged request.
#[derive(Debug, Clone)]
pub struct LoggedRequest {
    pub at: Instant,
    pub host: String,
    pub path: String,
}

/// Responses served per subsequent hit; the last entry repeats.
type Routes = Arc<Mutex<HashMap<String, Vec<CannedResponse>>>>;

pub struct FixtureServer {
    addr: SocketAddr,
    routes: Routes,
    log: Arc<Mutex<Vec<LoggedRequest>>>,
    stop: Arc<AtomicBool>,
    accept_thread: Option<JoinHandle<()>>,
}

impl FixtureServer {
    /// Binds an ephemeral loopback port and starts serving.
    pub fn start() -> Self {
        let listener = TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        let addr = listener.local_addr().expect("local addr");
        let routes: Routes = Arc::new(Mutex::new(HashMap::new()));
        let log = Arc::new(Mutex::new(Vec::new()));
        let stop = Arc::new(AtomicBool::new(false));

        let accept_routes = routes.clone();
        let accept_log = log.clone();
        let accept_stop = stop.clone();
        let accept_thread = std::thread::spawn(move || {
            for stream in listener.incoming() {
                if accept_stop.load(Ordering::SeqCst) {
                    break;
                }
                let Ok(stream) = stream else { continue };
                let routes = accept_routes.clone();
                let log = accept_log.clone();
                std::thread::spawn(move || {
                    let _ = serve_connection(stream, &routes, &log);
                });
            }
        });

        Self { addr, routes, log, stop, accept_thread: Some(accept_thread) }
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// Absolute URL for a path on this server.
    pub fn url(&self, path: &str) -> String {
        format!("http://{}{}", self.addr, path)
    }

    /// Registers a response under a path (exact match wins over the longest
    /// registered prefix).
    pub fn route(&self, path: &str, response: CannedResponse) {
        self.routes.lock().unwrap().insert(path.to_string(), vec![response]);
    }

    /// Registers a per-hit sequence: the first request gets `responses[0]`,
    /// the second `responses[1]`, …; the last entry repeats.
    pub fn route_sequence(&self, path: &str, responses: Vec<CannedResponse>) {
        assert!(!responses.is_empty());
        self.routes.lock().unwrap().insert(path.to_string(), responses);
    }

    pub fn requests(&self) -> Vec<LoggedRequest> {
        self.log.lock().unwrap().clone()
    }

    /// `host=127.0.0.1:port` pin entries for [`crate::fetch::FetchConfig::resolve`].
    pub fn resolve_entry(&self, host: &str) -> String {
        format!("{host}={}", self.addr)
    }
}

impl Drop for FixtureServer {
    fn drop(&mut self) {
        self.stop.store(true, Ordering::SeqCst);
        // Wake the accept loop.
        let _ = TcpStream::connect(self.addr);
        if let Some(handle) = self.accept_thread.take() {
            let _ = handle.join();
        }
    }
}

fn serve_connection(
    stream: TcpStream,
    routes: &Routes,
    log: &Arc<Mutex<Vec<LoggedRequest>>>,
) -> std::io::Result<()> {
    let peer = stream.try_clone()?;
    let mut reader = BufReader::new(peer);
    let mut request_line = String::new();
    reader.read_line(&mut request_line)?;
    let mut parts = request_line.split_whitespace();
    let _method = parts.next().unwrap_or("");
    let path = parts.next().unwrap_or("/").to_string();

    let mut host = String::new();
    let mut content_length = 0usize;
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 || line == "\r\n" || line == "\n" {
            break;
        }
        let lower = line.to_ascii_lowercase();
        if let Some(value) = lower.strip_prefix("host:") {
            host = value.trim().to_string();
        }
        if let Some(value) = lower.strip_prefix("content-length:") {
            content_length = value.trim().parse().unwrap_or(0);
        }
    }
    if content_length > 0 {
        let mut body = vec![0u8; content_length];
        reader.read_exact(&mut body)?;
    }

    log.lock().unwrap().push(LoggedRequest { at: Instant::now(), host: host.clone(), path: path.clone() });

    let response = {
        let mut routes = routes.lock().unwrap();
        let key = if routes.contains_key(&path) {
            Some(path.clone())
        } else {
            routes
                .keys()
                .filter(|k| path.starts_with(k.as_str()))
                .max_by_key(|k| k.len())
                .cloned()
        };
        key.and_then(|k| {
            let queue = routes.get_mut(&k)?;
            Some(if queue.len() > 1 { queue.remove(0) } else { queue[0].clone() })
        })
    };
    let response = response.unwrap_or_else(|| CannedResponse::status(404));

    let reason = match response.status {
        200 => "OK",
        301 => "Moved Permanently",
        302 => "Found",
        404 => "Not Found",
        429 => "Too Many Requests",
        500 => "Internal Server Error",
        _ => "Response",
    };
    let mut out = stream;
    let mut head = format!(
        "HTTP/1.1 {} {reason}\r\nContent-Length: {}\r\nContent-Type: {}\r\nConnection: close\r\n",
        response.status,
        response.body.len(),
        response.content_type
    );
    if let Some(location) = &response.location {
        head.push_str(&format!("Location: {location}\r\n"));
    }
    head.push_str("\r\n");
    out.write_all(head.as_bytes())?;
    out.write_all(&response.body)?;
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serves_routes_and_logs_requests() {
        let server = FixtureServer::start();
        server.route("/", CannedResponse::html("<html>ahoj</html>"));
        server.route("/cdx", CannedResponse::json("[]"));

        let body = std::io::Read::bytes(
            std::net::TcpStream::connect(server.addr()).map(|mut s| {
                s.write_all(b"GET / HTTP/1.1\r\nHost: test\r\n\r\n").unwrap();
                s
            }).unwrap(),
        )
        .collect::<Result<Vec<u8>, _>>()
        .unwrap();
        let text = String::from_utf8_lossy(&body);
        assert!(text.starts_with("HTTP/1.1 200 OK"));
        assert!(text.contains("ahoj"));
        assert_eq!(server.requests().len(), 1);
        assert_eq!(server.requests()[0].path, "/");
    }
}
