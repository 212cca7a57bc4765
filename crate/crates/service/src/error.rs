use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error("unknown session `{0}`")]
    UnknownSession(String),

    #[error("malformed request: {0}")]
    BadRequest(String),

    #[error("archive: {0}")]
    Archive(String),

    #[error(transparent)]
    Engine(#[from] citnet_core::Error),
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        use citnet_core::Error as E;
        match self {
            ApiError::UnknownSession(_) => StatusCode::NOT_FOUND,
            ApiError::BadRequest(_) => StatusCode::BAD_REQUEST,
            ApiError::Archive(_) => StatusCode::UNPROCESSABLE_ENTITY,
            ApiError::Engine(e) => match e {
                E::NotFound(_) => StatusCode::NOT_FOUND,
                E::NotMember(_) | E::Precondition(_) => StatusCode::CONFLICT,
                E::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
                _ => StatusCode::UNPROCESSABLE_ENTITY,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ApiError::UnknownSession(_) => "unknown-session",
            ApiError::BadRequest(_) => "bad-request",
            ApiError::Archive(_) => "archive",
            ApiError::Engine(e) => e.kind(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = json!({ "error": { "kind": self.kind(), "message": self.to_string() } });
        (self.status(), Json(body)).into_response()
    }
}

pub type ApiResult<T> = Result<T, ApiError>;
