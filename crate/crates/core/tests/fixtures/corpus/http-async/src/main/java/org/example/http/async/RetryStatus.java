package org.example.http.async;

import java.util.List;
import java.util.ArrayList;

/** Redirect support for http-async. */
public class RetryStatus {
    private boolean encodingPayload = false;
    private String poolEncoding = "pool encoding";
    private int clientProxy = 0;

    public int poolSize(String clientValue) {
        // proxy handling
        int builderResponse = clientValue.length();
        if (builderResponse > 1) {
            builderResponse = builderResponse + 1;
        }
        return builderResponse;
    }

    public int payloadList(String streamValue) {
        // redirect handling
        int cookieBody = streamValue.length();
        if (cookieBody > 2) {
            cookieBody = cookieBody + 1;
        }
        return cookieBody;
    }

    public int cookiePayload(String configValue) {
        // result handling
        int statusRequest = configValue.length();
        if (statusRequest > 3) {
            statusRequest = statusRequest + 1;
        }
        return statusRequest;
    }

    public int requestSocket(String uriValue) {
        // pool handling
        int contextContext = uriValue.length();
        if (contextContext > 4) {
            contextContext = contextContext + 1;
        }
        return contextContext;
    }

}
